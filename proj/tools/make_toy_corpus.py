#!/usr/bin/env python3
# Copyright 2026 The tretr Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the small topical corpus used by the test suite.

Documents mix words from one topic with a shared background vocabulary, so
BM25 rankings and query clusters both have some structure. Output is fully
determined by --seed.
"""

import argparse
import pathlib
import random

TOPICS = {
    "astronomy": "star planet orbit comet galaxy nebula telescope lunar solar "
                 "eclipse meteor cosmic quasar pulsar asteroid",
    "cooking": "recipe oven flour butter garlic onion simmer roast bake sauce "
               "pepper salt knife skillet broth",
    "finance": "stock bond market equity dividend yield credit loan interest "
               "bank portfolio hedge inflation asset tax",
    "medicine": "patient doctor vaccine virus dose clinic symptom therapy "
                "surgery nurse fever blood heart lung tumor",
    "music": "guitar piano melody chord rhythm tempo violin drum song band "
             "album concert lyric opera jazz",
    "sailing": "boat sail harbor anchor mast hull keel tide wind rudder "
               "deck crew voyage compass island",
    "software": "code compiler bug thread kernel socket parser module "
                "library cache query server client debug test",
    "garden": "soil seed tomato rose weed compost shovel bloom root leaf "
              "fence hedge mulch orchard prune",
}
BACKGROUND = ("the a of and to in is for on with as by at from this that "
              "it new old good small large first last many some very").split()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=pathlib.Path, required=True)
    ap.add_argument("--docs", type=int, default=480)
    ap.add_argument("--queries", type=int, default=160)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    names = sorted(TOPICS)
    words = {t: TOPICS[t].split() for t in names}
    # Zipf-ish preference inside a topic makes some docs easier to find.
    weights = [1.0 / (i + 1) for i in range(15)]

    docs = []
    for i in range(args.docs):
        topic = names[i % len(names)]
        n = rng.randint(8, 40)
        toks = []
        for _ in range(n):
            if rng.random() < 0.55:
                toks.append(rng.choices(words[topic], weights)[0])
            elif rng.random() < 0.15:
                other = rng.choice(names)
                toks.append(rng.choice(words[other]))
            else:
                toks.append(rng.choice(BACKGROUND))
        docs.append((f"d{i:03d}", topic, toks))

    queries = []
    for i in range(args.queries):
        topic = names[rng.randrange(len(names))]
        n = rng.randint(1, 3)
        terms = rng.sample(words[topic], n)
        queries.append((f"q{i:03d}", topic, terms))

    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.tsv", "w") as f:
        for did, _, toks in docs:
            f.write(f"{did}\t{' '.join(toks)}\n")
    with open(out / "queries.tsv", "w") as f:
        for qid, _, terms in queries:
            f.write(f"{qid}\t{' '.join(terms)}\n")
    # Grade 2: same topic and every query term present; grade 1: same topic
    # and some term present. Unjudged pairs are non-relevant.
    with open(out / "qrels.txt", "w") as f:
        for qid, topic, terms in queries:
            for did, dtopic, toks in docs:
                if dtopic != topic:
                    continue
                present = sum(t in toks for t in terms)
                if present == len(terms):
                    f.write(f"{qid} 0 {did} 2\n")
                elif present > 0:
                    f.write(f"{qid} 0 {did} 1\n")


if __name__ == "__main__":
    main()
