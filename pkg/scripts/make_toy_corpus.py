"""Generate the bundled 300-document toy corpus.

Three classes with disjoint keyword pools, so the classes are linearly
separable by construction; shared filler words, hashtags, mentions, URLs,
and retweet markers exercise the tokenizer without carrying class signal.
Every row has three coders; most are unanimous, a seeded minority are 2-1
splits whose majority still matches the construction class.

Regenerating overwrites src/hatetriage/data/toy_corpus.csv byte-for-byte.
"""

import csv
import io
import random
from pathlib import Path

SEED = 1303
N_PER_CLASS = {"hate": 60, "offensive": 150, "neither": 90}

KEYWORDS = {
    "hate": ["vermin", "scum", "filth", "vile", "despise", "loathe"],
    "offensive": ["damn", "crap", "sucks", "jerk", "stupid", "trash"],
    "neither": ["coffee", "morning", "sunshine", "weekend", "garden", "recipe"],
}

FILLERS = ["the", "a", "is", "so", "this", "that", "you", "i", "we", "they", "all", "just"]

HASHTAGS = {
    "hate": ["#angry", "#rant"],
    "offensive": ["#fail", "#smh"],
    "neither": ["#relax", "#sunny"],
}

TEMPLATES = [
    "{kw1} {f1} {kw2} {f2} {kw3}",
    "{f1} {kw1} {f2} {f3} {kw2} {kw3}",
    "{kw1} {kw2} {f1} {kw3} {f2} {f3}",
    "{f1} {f2} {kw1} {kw2} {kw3} {f3}",
    "{kw1} {f1} {f2} {kw2} {kw3} {f3} {f1}",
]


def build_text(rng: random.Random, cls: str) -> str:
    kws = rng.sample(KEYWORDS[cls], 3)
    fills = rng.sample(FILLERS, 3)
    body = rng.choice(TEMPLATES).format(
        kw1=kws[0], kw2=kws[1], kw3=kws[2], f1=fills[0], f2=fills[1], f3=fills[2]
    )
    parts = [body]
    roll = rng.random()
    if roll < 0.25:
        parts.append(rng.choice(HASHTAGS[cls]))
    elif roll < 0.40:
        parts.append("@pal" + str(rng.randrange(40)))
    elif roll < 0.50:
        parts.append("http://t.co/" + "".join(rng.choices("abcdefgh", k=6)))
    if rng.random() < 0.30:
        parts[-1] = parts[-1] + "!" * rng.randrange(1, 4)
    if rng.random() < 0.15:
        parts.insert(0, "RT @origin" + str(rng.randrange(30)) + ":")
    return " ".join(parts)


def vote_counts(rng: random.Random, cls: str) -> tuple[int, int, int]:
    order = ["hate", "offensive", "neither"]
    votes = {c: 0 for c in order}
    votes[cls] = 3
    if rng.random() < 0.15:
        votes[cls] = 2
        other = rng.choice([c for c in order if c != cls])
        votes[other] = 1
    return votes["hate"], votes["offensive"], votes["neither"]


CLASS_CODES = {"hate": 0, "offensive": 1, "neither": 2}


def main() -> None:
    rng = random.Random(SEED)
    rows = []
    for cls, n in N_PER_CLASS.items():
        for _ in range(n):
            h, o, x = vote_counts(rng, cls)
            rows.append((h + o + x, h, o, x, CLASS_CODES[cls], build_text(rng, cls)))
    rng.shuffle(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "count", "hate_speech", "offensive_language", "neither", "class", "tweet"])
    for i, row in enumerate(rows):
        writer.writerow([i, *row])
    out = Path(__file__).resolve().parent.parent / "src/hatetriage/data/toy_corpus.csv"
    out.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
