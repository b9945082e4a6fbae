"""Python access to the prompt-composition and meta-prompting library.

The compiled module returns structured results as JSON text; the wrappers
here decode them.
"""

import json as _json

from . import _catprompt
from ._catprompt import (
    CatpromptError,
    builtin_template,
    parse_numbered_list,
    render_meta_prompt,
    render_template,
    template_slots,
    tensor_strings,
)

__all__ = [
    "CatpromptError",
    "analyze",
    "build_pack",
    "builtin_template",
    "check_laws",
    "mock_complete",
    "parse_numbered_list",
    "render_meta_prompt",
    "render_template",
    "template_slots",
    "tensor_strings",
    "wilcoxon",
]


def mock_complete(rules, prompt, max_output_tokens=256):
    """Answer `prompt` with a mock rule set given as a dict."""
    return _catprompt.mock_complete(_json.dumps(rules), prompt, max_output_tokens)


def wilcoxon(differences, mode="automatic"):
    return _json.loads(_catprompt.wilcoxon(list(differences), mode))


def analyze(pack, rankings, k=3, pairing="per_record"):
    return _json.loads(_catprompt.analyze(str(pack), str(rankings), k, pairing))


def check_laws(fixture):
    return _json.loads(_catprompt.check_laws(str(fixture)))


def build_pack(corpus, task, template, mock_rules, n, seed_sample=1, seed_shuffle=1, cache_dir=None):
    """Annotation pack entries as a list of dicts."""
    text = _catprompt.build_pack(
        str(corpus), task, template, str(mock_rules), n, seed_sample, seed_shuffle,
        None if cache_dir is None else str(cache_dir),
    )
    return [_json.loads(line) for line in text.splitlines() if line]
