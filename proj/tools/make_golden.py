#!/usr/bin/env python3
# gramctc/tools/make_golden.py
#
# Copyright 2026 The gramctc Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates tests/fixtures/golden from exhaustive path enumeration.

Nothing here shares code with the C++ library: probabilities, gradients and
decodes all come from summing over every frame-level path.
"""

import itertools
import json
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden"

CASES = [
    # name, units, grams, label, frames, seed
    ("t1_single", "ab", ["a", "b"], "a", 1, 11),
    ("the", "the", ["t", "h", "e", "th"], "the", 5, 12),
    ("same_gram", "ab", ["a", "b", "aa"], "aa", 4, 13),
    ("cat_bigrams", "cat",
     ["c", "a", "t", "cc", "ca", "ct", "ac", "aa", "at", "tc", "ta", "tt"],
     "cat", 4, 14),
    ("empty_label", "ab", ["a", "b", "ab"], "", 3, 15),
    ("impossible", "ab", ["a", "b"], "abab", 2, 16),
    ("trigram", "xyz", ["x", "y", "z", "xy", "xyz"], "xyzx", 4, 17),
]


def softmax(row):
    m = max(row)
    e = [math.exp(v - m) for v in row]
    s = sum(e)
    return [v / s for v in e]


def collapse(path, symbols):
    out, prev = [], None
    for k in path:
        if k != prev and k != 0:
            out.append(symbols[k])
        prev = k
    return "".join(out)


def build(name, units, grams, label, frames, seed):
    rng = random.Random(seed)
    symbols = ["_"] + grams
    v = len(symbols)
    logits = [[round(rng.gauss(0.0, 1.5), 6) for _ in range(v)]
              for _ in range(frames)]
    y = [softmax(r) for r in logits]

    dist = {}
    p_label = 0.0
    occupancy = [[0.0] * v for _ in range(frames)]
    for path in itertools.product(range(v), repeat=frames):
        prob = 1.0
        for t, k in enumerate(path):
            prob *= y[t][k]
        out = collapse(path, symbols)
        dist[out] = dist.get(out, 0.0) + prob
        if out == label:
            p_label += prob
            for t, k in enumerate(path):
                occupancy[t][k] += prob

    case = {"name": name, "units": units, "grams": grams, "label": label,
            "logits": logits}
    if p_label > 0.0:
        case["loss"] = -math.log(p_label)
        case["grad"] = [[y[t][k] - occupancy[t][k] / p_label for k in range(v)]
                        for t in range(frames)]
    else:
        case["loss"] = None
        case["grad"] = None

    greedy = [max(range(v), key=lambda k: (y[t][k], -k)) for t in range(frames)]
    case["greedy_framewise"] = "|".join(symbols[k] for k in greedy)
    case["greedy_label"] = collapse(greedy, symbols)

    ranked = sorted(dist.items(), key=lambda kv: (-kv[1], len(kv[0]), kv[0]))
    case["top_labels"] = [{"label": lab, "log_prob": math.log(p)}
                          for lab, p in ranked[:3]]

    d = OUT / name
    d.mkdir(parents=True, exist_ok=True)
    (d / "vocab.txt").write_text("#units: " + units + "\n" +
                                 "".join(g + "\n" for g in grams))
    (d / "logits.csv").write_text(
        "".join(",".join(repr(x) for x in row) + "\n" for row in logits))
    (d / "case.json").write_text(json.dumps(case, indent=1) + "\n")


def main():
    for c in CASES:
        build(*c)
        print("wrote", c[0])


if __name__ == "__main__":
    main()
