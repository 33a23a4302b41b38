"""Generate the bundled mini-treebank: 500 synthetic template sentences with
Penn tags, written as "word TAB tag" lines with blank lines between
sentences. Deterministic; rerunning reproduces the file byte for byte.

Vocabulary is arranged so that "dogs" (NNS) and "bark" (VBP) occur well past
the tag-dictionary thresholds with a single tag each, while a handful of
forms (play, read, run) stay genuinely ambiguous across tags.
"""

import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "hatetriage" / "data" / "mini_treebank.conll"

VOCAB = {
    "DT": ["the", "a", "this", "that", "these", "those"],
    "NN": ["cat", "house", "tree", "river", "garden", "teacher", "story", "road",
           "song", "bird", "city", "book", "game", "friend", "play", "child"],
    "NNS": ["cats", "trees", "birds", "books", "children", "rivers", "houses",
            "stories", "games", "friends", "teachers", "roads"],
    "JJ": ["big", "small", "quick", "bright", "quiet", "happy", "old", "new",
           "green", "cold", "warm", "loud"],
    "VBZ": ["runs", "sings", "sleeps", "jumps", "reads", "writes", "walks", "sees"],
    "VBP": ["run", "sing", "sleep", "jump", "read", "write", "walk", "play"],
    "VBD": ["ran", "sang", "slept", "jumped", "played", "walked", "wrote", "saw"],
    "VBG": ["running", "singing", "sleeping", "jumping", "playing", "walking", "reading"],
    "VBN": ["taken", "seen", "written", "broken", "eaten"],
    "VB": ["run", "sing", "sleep", "jump", "play", "walk", "read", "eat", "see"],
    "IN": ["in", "on", "under", "near", "over", "with", "from", "at", "by"],
    "RB": ["quickly", "slowly", "loudly", "softly", "often", "always"],
    "PRP": ["he", "she", "they", "we", "it", "i"],
    "PRP$": ["his", "her", "their", "our", "its", "my"],
    "CC": ["and", "but", "or"],
    "MD": ["can", "will", "may", "must", "should"],
    "CD": ["two", "three", "four", "five", "seven", "1990", "42"],
    "NNP": ["london", "mary", "john", "paris", "rex"],
}

TEMPLATES = [
    ["DT", "NN", "VBZ", "RB", "."],
    ["DT", "JJ", "NN", "VBZ", "IN", "DT", "NN", "."],
    "DOGS_BARK",
    ["DT", "JJ", "NNS", "VBP", "IN", "DT", "NN", "."],
    ["PRP", "MD", "VB", "DT", "NN", "."],
    ["PRP", "VBD", "IN", "DT", "JJ", "NN", "."],
    ["NNP", "VBZ", "DT", "NN", "."],
    ["PRP$", "NNS", "VBP", "IN", "DT", "NN", "."],
    "COPULA_PLURAL",
    "COPULA_SINGULAR",
    ["CD", "NNS", "VBP", "IN", "DT", "NN", "."],
    "PASSIVE",
    ["PRP", "MD", "RB", "VB", "."],
    ["DT", "JJ", ",", "JJ", "NN", "VBZ", "RB", "."],
    ["DT", "NNS", "VBP", "CC", "PRP", "VBP", "."],
    ["DT", "NN", "IN", "DT", "NN", "VBD", "RB", "."],
]


def fill(template, rng):
    if template == "DOGS_BARK":
        words = ["the", "dogs", "bark", rng.choice(VOCAB["RB"]), "."]
        tags = ["DT", "NNS", "VBP", "RB", "."]
    elif template == "COPULA_PLURAL":
        words = ["the", rng.choice(VOCAB["NNS"]), "are", rng.choice(VOCAB["VBG"]),
                 rng.choice(VOCAB["IN"]), "the", rng.choice(VOCAB["NN"]), "."]
        tags = ["DT", "NNS", "VBP", "VBG", "IN", "DT", "NN", "."]
    elif template == "COPULA_SINGULAR":
        words = [rng.choice(VOCAB["PRP"][:3]), "is", rng.choice(VOCAB["JJ"]),
                 "and", rng.choice(VOCAB["JJ"]), "."]
        tags = ["PRP", "VBZ", "JJ", "CC", "JJ", "."]
    elif template == "PASSIVE":
        words = ["the", rng.choice(VOCAB["NN"]), "was", rng.choice(VOCAB["VBN"]),
                 "by", rng.choice(VOCAB["NNP"]), "."]
        tags = ["DT", "NN", "VBD", "VBN", "IN", "NNP", "."]
    else:
        words = [rng.choice(VOCAB[t]) if t in VOCAB else t for t in template]
        tags = list(template)
    return list(zip(words, tags))


def main():
    rng = random.Random(7)
    lines = []
    for i in range(500):
        sentence = fill(TEMPLATES[i % len(TEMPLATES)], rng)
        for word, tag in sentence:
            lines.append(f"{word}\t{tag}")
        lines.append("")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines).rstrip("\n") + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({sum(1 for l in lines if not l)} sentences)")


if __name__ == "__main__":
    main()
