"""Greedy averaged-perceptron Penn POS tagger.

Decoding is left to right, conditioning on the tagger's own previous two
predictions. Unambiguous frequent words (seen at least 20 times with at
least 97% single-tag purity) are frozen into a tag dictionary that
short-circuits the model. Weights are averaged over the full update history
with the timestamp trick. The tagger is case-insensitive: it is meant to run
on the lowercased, unstemmed token stream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._serialize import ArtifactFormatError, dump_artifact, load_artifact

MAGIC = "postag"
FORMAT_VERSION = 1

TAGDICT_MIN_COUNT = 20
TAGDICT_MIN_PURITY = 0.97

START = ("-START-", "-START2-")
END = ("-END-", "-END2-")

# Penn Treebank tagset: word classes plus punctuation tags
PENN_TAGSET = frozenset(
    """CC CD DT EX FW IN JJ JJR JJS LS MD NN NNP NNPS NNS PDT POS PRP PRP$
       RB RBR RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB
       . , : `` '' -LRB- -RRB- # $""".split()
)


@dataclass(frozen=True)
class TagModel:
    tagset: tuple[str, ...]
    tagdict: dict[str, str]
    weights: dict[str, dict[str, float]]
    version: int = FORMAT_VERSION

    def __post_init__(self):
        known = set(self.tagset)
        for word, tag in self.tagdict.items():
            if tag not in known:
                raise ValueError(f"tagdict tag {tag!r} (word {word!r}) not in tagset")
        for feature, per_tag in self.weights.items():
            for tag in per_tag:
                if tag not in known:
                    raise ValueError(f"weight tag {tag!r} (feature {feature!r}) not in tagset")


def _normalize(word: str) -> str:
    """Collapse rare shapes so unknown words share features."""
    if "-" in word and word[0] != "-":
        return "!HYPHEN"
    if word.isdigit() and len(word) == 4:
        return "!YEAR"
    if word and word[0].isdigit():
        return "!DIGITS"
    return word.lower()


def _features(
    i: int, word: str, context: list[str], prev: str, prev2: str
) -> list[str]:
    """Feature strings for the word at position i (context is padded, so the
    word itself sits at context[i + 2])."""
    c = i + 2
    return [
        "bias",
        "suffix " + word[-3:],
        "prefix " + word[:3],
        "prev tag " + prev,
        "prev2 tag " + prev2,
        "prev tags " + prev + " " + prev2,
        "word " + context[c],
        "prev tag+word " + prev + " " + context[c],
        "prev word " + context[c - 1],
        "prev suffix " + context[c - 1][-3:],
        "prev2 word " + context[c - 2],
        "next word " + context[c + 1],
        "next suffix " + context[c + 1][-3:],
        "next2 word " + context[c + 2],
    ]


class _AveragedTrainer:
    """Perceptron weights plus the bookkeeping for averaging.

    The clock ticks once per update() call, including calls where the guess
    was already correct, so the average is over every training decision.
    """

    def __init__(self, tagset: tuple[str, ...]):
        self.tagset = tagset
        self.weights: dict[str, dict[str, float]] = {}
        self._totals: dict[tuple[str, str], float] = {}
        self._stamps: dict[tuple[str, str], int] = {}
        self.clock = 0

    def predict(self, features: list[str]) -> str:
        scores: dict[str, float] = {}
        for feature in features:
            per_tag = self.weights.get(feature)
            if not per_tag:
                continue
            for tag, weight in per_tag.items():
                scores[tag] = scores.get(tag, 0.0) + weight
        # ties, including the all-zero cold start, go to the smallest tag
        return min(self.tagset, key=lambda t: (-scores.get(t, 0.0), t))

    def _shift(self, feature: str, tag: str, delta: float):
        key = (feature, tag)
        per_tag = self.weights.setdefault(feature, {})
        current = per_tag.get(tag, 0.0)
        self._totals[key] = self._totals.get(key, 0.0) + (self.clock - self._stamps.get(key, 0)) * current
        self._stamps[key] = self.clock
        per_tag[tag] = current + delta

    def update(self, truth: str, guess: str, features: list[str]):
        self.clock += 1
        if truth == guess:
            return
        for feature in features:
            self._shift(feature, truth, 1.0)
            self._shift(feature, guess, -1.0)

    def averaged_weights(self) -> dict[str, dict[str, float]]:
        if self.clock == 0:
            return {}
        averaged: dict[str, dict[str, float]] = {}
        for feature, per_tag in self.weights.items():
            kept = {}
            for tag, weight in per_tag.items():
                key = (feature, tag)
                total = self._totals.get(key, 0.0)
                total += (self.clock - self._stamps.get(key, 0)) * weight
                mean = total / self.clock
                if mean != 0.0:
                    kept[tag] = mean
            if kept:
                averaged[feature] = kept
        return averaged


def _build_tagdict(sentences: list[list[tuple[str, str]]]) -> dict[str, str]:
    counts: dict[str, dict[str, int]] = {}
    for sentence in sentences:
        for word, tag in sentence:
            counts.setdefault(word.lower(), {}).setdefault(tag, 0)
            counts[word.lower()][tag] += 1
    tagdict = {}
    for word, per_tag in counts.items():
        total = sum(per_tag.values())
        if total < TAGDICT_MIN_COUNT:
            continue
        tag, n = max(per_tag.items(), key=lambda kv: (kv[1], kv[0]))
        if n / total >= TAGDICT_MIN_PURITY:
            tagdict[word] = tag
    return tagdict


def _padded_context(words: list[str]) -> list[str]:
    return list(START) + [_normalize(w) for w in words] + list(END)


def train_tagger(
    sentences: list[list[tuple[str, str]]], epochs: int, seed: int
) -> TagModel:
    """Train on tagged sentences with per-epoch seeded shuffling."""
    if epochs < 1:
        raise ValueError("epochs must be positive")
    material = [s for s in sentences if s]
    if not material:
        raise ValueError("training requires at least one non-empty tagged sentence")
    seen_tags = set()
    for sentence in material:
        for word, tag in sentence:
            if tag not in PENN_TAGSET:
                raise ValueError(f"unknown tag {tag!r} (word {word!r})")
            seen_tags.add(tag)
    tagset = tuple(sorted(seen_tags))
    tagdict = _build_tagdict(material)

    trainer = _AveragedTrainer(tagset)
    rng = random.Random(seed)
    order = list(material)
    for _ in range(epochs):
        rng.shuffle(order)
        for sentence in order:
            words = [w for w, _ in sentence]
            context = _padded_context(words)
            prev, prev2 = START
            for i, (word, tag) in enumerate(sentence):
                guess = tagdict.get(word.lower())
                if guess is None:
                    feats = _features(i, word.lower(), context, prev, prev2)
                    guess = trainer.predict(feats)
                    trainer.update(tag, guess, feats)
                prev2, prev = prev, guess
    return TagModel(tagset=tagset, tagdict=tagdict, weights=trainer.averaged_weights())


def tag(model: TagModel, tokens: list[str]) -> list[str]:
    """One tag per token; tagdict hits bypass the weights."""
    if not tokens:
        return []
    context = _padded_context(tokens)
    output = []
    prev, prev2 = START
    for i, token in enumerate(tokens):
        chosen = model.tagdict.get(token.lower())
        if chosen is None:
            feats = _features(i, token.lower(), context, prev, prev2)
            scores: dict[str, float] = {}
            for feature in feats:
                per_tag = model.weights.get(feature)
                if not per_tag:
                    continue
                for t, weight in per_tag.items():
                    scores[t] = scores.get(t, 0.0) + weight
            chosen = min(model.tagset, key=lambda t: (-scores.get(t, 0.0), t))
        output.append(chosen)
        prev2, prev = prev, chosen
    return output


def save_model(model: TagModel) -> bytes:
    payload = {
        "tagset": list(model.tagset),
        "tagdict": model.tagdict,
        "weights": model.weights,
    }
    return dump_artifact(MAGIC, model.version, payload)


def load_model(data: bytes) -> TagModel:
    payload = load_artifact(data, MAGIC, FORMAT_VERSION)
    try:
        tagset = tuple(payload["tagset"])
        tagdict = dict(payload["tagdict"])
        weights = {f: dict(per_tag) for f, per_tag in payload["weights"].items()}
    except (KeyError, TypeError, AttributeError):
        raise ArtifactFormatError("tagger payload missing required fields") from None
    return TagModel(tagset=tagset, tagdict=tagdict, weights=weights)


def parse_conll(text: str) -> list[list[tuple[str, str]]]:
    """Parse "word TAB tag" lines with blank lines between sentences."""
    sentences: list[list[tuple[str, str]]] = []
    current: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"line {lineno}: expected 'word TAB tag'")
        current.append((parts[0], parts[1]))
    if current:
        sentences.append(current)
    return sentences
