"""Writes the synthetic preference packs and rankings under data/preference.

preferred: every annotator puts the three meta candidates above the three
baselines on all 20 entries. symmetric: the same, mirrored on every other
entry, so the paired differences cancel.
"""

import csv
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[2] / "data" / "preference"
ENTRIES = 20
META = ["m1", "m2", "m3"]
BASE = ["b1", "b2", "b3"]
BASELINES = ["Make it more concise", "Make it longer", "Explain this to a 5 year old"]


def pack_lines():
    lines = []
    for i in range(1, ENTRIES + 1):
        item = f"e{i:02d}"
        generated = [f"Suggestion {k} for entry {i}." for k in range(1, 6)]
        candidates = [
            {"id": f"m{k}", "kind": "meta", "prompt": generated[k - 1], "output": f"Output of m{k} on entry {i}."}
            for k in range(1, 4)
        ] + [
            {"id": f"b{k}", "kind": "baseline", "prompt": BASELINES[k - 1], "output": f"Output of b{k} on entry {i}."}
            for k in range(1, 4)
        ]
        lines.append({
            "schema_version": 1,
            "task": "ideation",
            "template": "full",
            "item_id": item,
            "context": f"# Input text:\n[previous context]:\nBefore {i}.\n[Text]:\nEntry {i}.\n# [following context]:\nAfter {i}.",
            "shuffle_seed": i,
            "generated": generated,
            "candidates": candidates,
        })
    return lines


def rankings(mirror_odd, rng):
    rows = []
    for i in range(1, ENTRIES + 1):
        for target in ("prompts", "outputs"):
            top, bottom = META[:], BASE[:]
            if mirror_odd and i % 2 == 0:
                top, bottom = bottom, top
            rng.shuffle(top)
            rng.shuffle(bottom)
            rows.append([f"e{i:02d}", "a1", target] + top + bottom)
    return rows


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "pack.jsonl", "w", newline="\n") as f:
        for line in pack_lines():
            f.write(json.dumps(line, sort_keys=True) + "\n")
    rng = random.Random(20240)
    header = ["item_id", "annotator_id", "target"] + [f"rank_{k}" for k in range(1, 7)]
    for name, mirror in (("rankings_preferred.csv", False), ("rankings_symmetric.csv", True)):
        with open(OUT / name, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(header)
            w.writerows(rankings(mirror, rng))


if __name__ == "__main__":
    main()
