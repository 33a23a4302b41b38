"""
From raw tweet to feature ingredients
=====================================

One tweet passes through tokenization, stemming, part-of-speech tagging,
sentiment scoring, and readability/surface measurement. These are the raw
ingredients every model input is assembled from.
"""

import importlib.resources

from hatetriage.lexfeat import SentimentLexicon, readability, sentiment_scores, surface_features
from hatetriage.postag import load_model, tag
from hatetriage.textproc import count_syllables, porter_stem, preprocess, tokenize, unstemmed_words

TWEET = "RT @someone: I really hate waiting for the bus!! http://t.co/x #mornings"

# tokenization classifies each chunk and normalizes URLs and mentions
tokens = tokenize(TWEET)
print("tokens:")
for t in tokens:
    print(f"  {t.kind.name:8s} {t.surface!r}")

# preprocess() keeps the modeling view: stemmed words plus placeholders
print("\nword-model view:", preprocess(TWEET))

# stems and syllables for a few inflected forms
for word in ("waiting", "mornings", "hate"):
    print(f"{word}: stem={porter_stem(word)!r} syllables={count_syllables(word)}")

# the bundled tagger assigns Penn tags to the unstemmed words
data = importlib.resources.files("hatetriage.data")
tagger = load_model(data.joinpath("pos_model.txt").read_bytes())
words = unstemmed_words(TWEET)
print("\npos tags:", list(zip(words, tag(tagger, words))))

# lexicon-based sentiment with negation, booster, and exclamation rules
lexicon = SentimentLexicon.from_text(
    data.joinpath("sentiment_lexicon.tsv").read_text(encoding="utf-8")
)
print("\nsentiment:", sentiment_scores(tokens, lexicon))

# readability treats the whole tweet as a single sentence, using the
# surface word and syllable counts
surface = surface_features(TWEET, tokens)
print("readability:", readability(surface.num_words, surface.num_syllables))
print("surface:", surface)
