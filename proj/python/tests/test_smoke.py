import json
import os
from pathlib import Path

import pytest

import catprompt

DATA = Path(os.environ.get("CATPROMPT_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_tensor_is_newline_join_with_empty_unit():
    assert catprompt.tensor_strings("a", "b") == "a\nb"
    assert catprompt.tensor_strings("", "b") == "b"
    assert catprompt.tensor_strings("a", "") == "a"


def test_template_slots_and_render():
    assert catprompt.template_slots("{B} then {A} then {B}") == ["B", "A"]
    assert catprompt.render_template("x {{literal}} {A}", {"A": "1"}) == "x {literal} 1"


def test_parse_errors_carry_a_code():
    with pytest.raises(catprompt.CatpromptError) as info:
        catprompt.render_template("{A", {})
    assert info.value.code == "parse"


def test_mock_rules_first_match_and_refusal():
    rules = {
        "rules": [
            {"name": "upper", "pattern": "^Shout (.*)$", "rewrite": "$1!"},
            {"name": "any", "pattern": "^Shout", "rewrite": "never"},
        ]
    }
    assert catprompt.mock_complete(rules, "Shout hi") == "hi!"
    assert catprompt.mock_complete(rules, "Whisper") == "As a LLM I cannot perform this task"


def test_numbered_list_with_seed():
    items, extra, seed = catprompt.parse_numbered_list(" first\n2) second", 2, "1)")
    assert items == ["first", "second"]
    assert not extra and seed


def test_figure_one_starts_the_short_template():
    assert catprompt.builtin_template("short").startswith("# Input:\n{CONTEXT GOES HERE}\n")
    rendered = catprompt.render_meta_prompt("full", "a longer ending", "Some text.")
    assert rendered.startswith("Some text.\n|Start of Instructions|")
    assert rendered.endswith("Begin response\n1)")


def test_wilcoxon_hand_cases():
    assert catprompt.wilcoxon([1, 2, 3], "exact")["p"] == 0.25
    assert catprompt.wilcoxon([3, -1, 2], "exact")["p"] == 0.5
    with pytest.raises(catprompt.CatpromptError):
        catprompt.wilcoxon([0, 0])


def test_prompt_category_laws():
    report = catprompt.check_laws(DATA / "fixtures" / "prompt_category.json")
    assert report["passed"] and report["failures"] == 0 and report["instances"] > 0


def test_replay_pack_for_both_tasks():
    for task in ("ideation", "creativity"):
        entries = catprompt.build_pack(
            DATA / "corpus" / "synthetic.jsonl", task, "full", DATA / "mock" / "pipeline.json", 8,
            cache_dir=DATA / "replay" / task,
        )
        assert len(entries) == 8
        assert all(len(e["generated"]) == 5 for e in entries)


def test_analyze_preference_fixture():
    pref = DATA / "preference"
    report = catprompt.analyze(pref / "pack.jsonl", pref / "rankings_preferred.csv")
    json.dumps(report)
    for target in report["targets"]:
        assert target["wilcoxon"]["p"] == pytest.approx(2 / 2**20, rel=1e-12)
