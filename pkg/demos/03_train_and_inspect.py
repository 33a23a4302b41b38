"""
Training a classifier and reading its weights
=============================================

Fit the full feature pipeline and a one-vs-rest logistic model on the
bundled corpus, then look at which features carry each class.
"""

import importlib.resources

import numpy as np

from hatetriage.corpus import LABELS, parse_corpus
from hatetriage.lexfeat import SentimentLexicon
from hatetriage.linmodel import predict
from hatetriage.pipeline import (
    FeatureSettings,
    ModelConfig,
    extract_ingredients,
    fit_config_model,
    fit_features,
    model_input_matrix,
)
from hatetriage.postag import load_model

data = importlib.resources.files("hatetriage.data")
records = parse_corpus(data.joinpath("toy_corpus.csv").read_bytes())
tagger = load_model(data.joinpath("pos_model.txt").read_bytes())
lexicon = SentimentLexicon.from_text(
    data.joinpath("sentiment_lexicon.tsv").read_text(encoding="utf-8")
)

texts = [r.text for r in records]
y = [int(r.label) for r in records]
ingredients = extract_ingredients(texts, tagger, lexicon)

# n-gram TF-IDF blocks, scalar features, standardization, L1 selection
settings = FeatureSettings(min_df=2)
fitted = fit_features(ingredients, y, settings)
print(f"feature registry: {len(fitted.registry)} columns")
print(f"after L1 selection: {len(fitted.selected_columns)} columns kept")

# the selected columns feed an L2 logistic one-vs-rest model
config = ModelConfig("logreg", "l2", 1.0)
X = model_input_matrix(config.kind, fitted, ingredients)
model = fit_config_model(config, X, y)
accuracy = float((predict(model, X) == np.array(y)).mean())
print(f"in-sample accuracy: {accuracy:.3f} (converged={model.converged})")

# strongest positive weights per class, by registry name
names = [f"{fitted.registry[c][0]}:{fitted.registry[c][1]}" for c in fitted.selected_columns]
for k, label in enumerate(LABELS):
    order = np.argsort(model.weights[k])[::-1][:5]
    top = ", ".join(f"{names[j]} ({model.weights[k][j]:+.2f})" for j in order)
    print(f"{label.display:9s} <- {top}")
