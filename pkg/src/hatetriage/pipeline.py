"""End-to-end feature pipeline shared by evaluation and the CLI.

This module turns raw tweet texts into the per-document ingredients every
feature block needs (stemmed tokens, POS tag sequences, scalar scores),
fits the corpus-dependent feature state (vocabularies, standardization,
L1 column selection) on a chosen training subset, and bundles everything
a standalone predictor needs into one versioned artifact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ._serialize import dump_artifact, load_artifact
from .lexfeat import (
    ReadabilityScores,
    SentimentLexicon,
    SentimentScores,
    SurfaceFeatures,
    readability,
    sentiment_scores,
    surface_features,
)
from .linmodel import (
    LinearModel,
    fit_linear_svm,
    fit_logreg,
    fit_multinomial_nb,
    model_from_payload,
    model_payload,
    predict,
    predict_scores,
)
from .postag import TagModel, tag
from .postag import load_model as load_tag_model
from .postag import save_model as save_tag_model
from .textproc import preprocess, tokenize, unstemmed_words
from .vectorize import (
    FeatureMatrix,
    Standardizer,
    Vocabulary,
    assemble_features,
    fit_vocab,
    select_l1,
    transform_counts,
    transform_tfidf,
)

PIPELINE_MAGIC = "pipeline"
PIPELINE_FORMAT_VERSION = 1

MODEL_KINDS = ("logreg", "svm", "nb")

_PENALTIES = {"logreg": ("l1", "l2"), "svm": ("l2",), "nb": ("none",)}


@dataclass(frozen=True)
class FeatureSettings:
    """Corpus-independent knobs of the feature stage."""

    word_ngram_lo: int = 1
    word_ngram_hi: int = 3
    pos_ngram_lo: int = 1
    pos_ngram_hi: int = 3
    min_df: int = 5
    max_df_ratio: float = 0.75
    standardize: bool = True
    select: bool = True
    select_c: float = 1.0
    select_tol: float = 1e-4

    def __post_init__(self):
        if not 1 <= self.word_ngram_lo <= self.word_ngram_hi:
            raise ValueError("require 1 <= word_ngram_lo <= word_ngram_hi")
        if not 1 <= self.pos_ngram_lo <= self.pos_ngram_hi:
            raise ValueError("require 1 <= pos_ngram_lo <= pos_ngram_hi")
        if self.min_df < 1:
            raise ValueError("min_df must be >= 1")
        if not 0.0 < self.max_df_ratio <= 1.0:
            raise ValueError("max_df_ratio must lie in (0, 1]")
        if self.select_c <= 0:
            raise ValueError("select_c must be positive")
        if self.select_tol <= 0:
            raise ValueError("select_tol must be positive")


@dataclass(frozen=True)
class ModelConfig:
    """One classifier configuration: kind, penalty, strength, weighting.

    For naive Bayes the C slot carries the Laplace smoothing strength and
    penalty must be "none"; class_weight is ignored there because the class
    priors already encode imbalance.
    """

    kind: str
    penalty: str
    C: float
    class_weight: str = "uniform"

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.penalty not in _PENALTIES[self.kind]:
            raise ValueError(
                f"model kind {self.kind!r} does not support penalty {self.penalty!r}"
            )
        if not self.C > 0:
            raise ValueError("C must be positive")
        if self.class_weight not in ("uniform", "balanced"):
            raise ValueError("class_weight must be 'uniform' or 'balanced'")

    def describe(self) -> str:
        return (
            f"{self.kind} penalty={self.penalty} C={self.C:g} "
            f"class_weight={self.class_weight}"
        )


@dataclass(frozen=True)
class PipelineSettings:
    features: FeatureSettings
    model: ModelConfig


@dataclass(frozen=True)
class Ingredients:
    """Per-document raw material for every feature block.

    Extraction is row-independent, so any subset of rows can later be used
    to fit or transform without touching the other rows.
    """

    word_docs: tuple[tuple[str, ...], ...]
    pos_docs: tuple[tuple[str, ...], ...]
    sentiment: tuple[SentimentScores, ...]
    readability: tuple[ReadabilityScores, ...]
    surface: tuple[SurfaceFeatures, ...]

    def __post_init__(self):
        n = len(self.word_docs)
        if not all(
            len(part) == n
            for part in (self.pos_docs, self.sentiment, self.readability, self.surface)
        ):
            raise ValueError("ingredient blocks disagree on document count")

    def __len__(self) -> int:
        return len(self.word_docs)


def extract_ingredients(
    texts, tagger: TagModel, lexicon: SentimentLexicon
) -> Ingredients:
    """Tokenize, stem, tag, and score every text once, up front."""
    word_docs = []
    pos_docs = []
    sent = []
    read = []
    surf = []
    for text in texts:
        tokens = tokenize(text)
        word_docs.append(tuple(preprocess(text)))
        words = unstemmed_words(text)
        pos_docs.append(tuple(tag(tagger, words)) if words else ())
        sent.append(sentiment_scores(tokens, lexicon))
        sf = surface_features(text, tokens)
        surf.append(sf)
        # tweets with no countable words are scored as one empty word so the
        # readability formulas stay defined
        read.append(readability(max(1, sf.num_words), max(1, sf.num_syllables)))
    return Ingredients(
        word_docs=tuple(word_docs),
        pos_docs=tuple(pos_docs),
        sentiment=tuple(sent),
        readability=tuple(read),
        surface=tuple(surf),
    )


@dataclass(frozen=True)
class FittedFeatures:
    """Everything corpus-dependent that transform-time needs.

    selected_columns is None when selection is off; registry covers the full
    assembled matrix before selection.
    """

    settings: FeatureSettings
    word_vocab: Vocabulary
    pos_vocab: Vocabulary
    standardizer: Standardizer | None
    selected_columns: tuple[int, ...] | None
    registry: tuple[tuple[str, str], ...]

    @property
    def n_ngram_columns(self) -> int:
        return len(self.word_vocab) + len(self.pos_vocab)


def _rows(ingredients: Ingredients, indices) -> tuple[list, list, list, list, list]:
    wdocs = [list(ingredients.word_docs[i]) for i in indices]
    pdocs = [list(ingredients.pos_docs[i]) for i in indices]
    sent = [ingredients.sentiment[i].as_tuple() for i in indices]
    read = [ingredients.readability[i].as_tuple() for i in indices]
    surf = [ingredients.surface[i].as_tuple() for i in indices]
    return wdocs, pdocs, sent, read, surf


def fit_features(
    ingredients: Ingredients, y, settings: FeatureSettings, indices=None
) -> FittedFeatures:
    """Fit vocabularies, standardization, and L1 selection on the given
    rows only; rows outside `indices` never influence the result."""
    if indices is None:
        indices = range(len(ingredients))
    indices = list(indices)
    wdocs, pdocs, sent, read, surf = _rows(ingredients, indices)
    word_vocab = fit_vocab(
        wdocs,
        settings.word_ngram_lo,
        settings.word_ngram_hi,
        settings.min_df,
        settings.max_df_ratio,
    )
    pos_vocab = fit_vocab(
        pdocs,
        settings.pos_ngram_lo,
        settings.pos_ngram_hi,
        settings.min_df,
        settings.max_df_ratio,
    )
    assembled, standardizer = assemble_features(
        transform_tfidf(word_vocab, wdocs, block="word-ngram"),
        transform_tfidf(pos_vocab, pdocs, block="pos-ngram"),
        sent,
        read,
        surf,
        standardize=settings.standardize,
    )
    selected = None
    if settings.select:
        y_sub = [int(y[i]) for i in indices]
        selected = tuple(
            select_l1(assembled, y_sub, C=settings.select_c, tol=settings.select_tol)
        )
    return FittedFeatures(
        settings=settings,
        word_vocab=word_vocab,
        pos_vocab=pos_vocab,
        standardizer=standardizer,
        selected_columns=selected,
        registry=tuple((block, name) for block, name in assembled.registry),
    )


def feature_matrix(
    fitted: FittedFeatures, ingredients: Ingredients, indices=None
) -> FeatureMatrix:
    """Assembled TF-IDF + scalar matrix for the given rows, projected onto
    the selected columns when selection is active."""
    if indices is None:
        indices = range(len(ingredients))
    wdocs, pdocs, sent, read, surf = _rows(ingredients, list(indices))
    assembled, _ = assemble_features(
        transform_tfidf(fitted.word_vocab, wdocs, block="word-ngram"),
        transform_tfidf(fitted.pos_vocab, pdocs, block="pos-ngram"),
        sent,
        read,
        surf,
        standardizer=fitted.standardizer,
        standardize=fitted.settings.standardize,
    )
    if fitted.selected_columns is None:
        return assembled
    return assembled.project(list(fitted.selected_columns))


def count_matrix(
    fitted: FittedFeatures, ingredients: Ingredients, indices=None
) -> FeatureMatrix:
    """Raw n-gram count matrix for count-based models.

    Scalar blocks are excluded (they can be negative); the L1 selection is
    intersected with the n-gram column span, which aligns one-to-one with
    the leading columns of the assembled matrix.
    """
    if indices is None:
        indices = range(len(ingredients))
    wdocs, pdocs, _, _, _ = _rows(ingredients, list(indices))
    word_block = transform_counts(fitted.word_vocab, wdocs, block="word-ngram")
    pos_block = transform_counts(fitted.pos_vocab, pdocs, block="pos-ngram")
    combined = FeatureMatrix(
        matrix=sparse.hstack([word_block.matrix, pos_block.matrix], format="csr"),
        registry=word_block.registry + pos_block.registry,
    )
    if fitted.selected_columns is None:
        return combined
    kept = [c for c in fitted.selected_columns if c < fitted.n_ngram_columns]
    if not kept:
        raise ValueError(
            "L1 selection kept no n-gram columns; count-based models need at "
            "least one (raise select_c or disable selection)"
        )
    return combined.project(kept)


def model_input_matrix(
    kind: str, fitted: FittedFeatures, ingredients: Ingredients, indices=None
) -> FeatureMatrix:
    if kind == "nb":
        return count_matrix(fitted, ingredients, indices)
    return feature_matrix(fitted, ingredients, indices)


def fit_config_model(
    config: ModelConfig,
    X,
    y,
    tol: float = 1e-4,
    max_iter: int = 1000,
    seed: int = 42,
) -> LinearModel:
    """Dispatch one ModelConfig to the matching solver."""
    if config.kind == "logreg":
        return fit_logreg(
            X,
            y,
            penalty=config.penalty,
            C=config.C,
            class_weight=config.class_weight,
            tol=tol,
            max_iter=max_iter,
            seed=seed,
        )
    if config.kind == "svm":
        return fit_linear_svm(
            X,
            y,
            C=config.C,
            class_weight=config.class_weight,
            tol=tol,
            max_iter=max_iter,
            seed=seed,
        )
    return fit_multinomial_nb(X, y, alpha=config.C)


def build_grid(models, penalties, cs, class_weights) -> tuple[ModelConfig, ...]:
    """Cartesian product of grid axes, with penalties normalized per model
    kind (svm is always l2, nb always none) and duplicates dropped."""
    configs: list[ModelConfig] = []
    seen = set()
    for kind in models:
        if kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {kind!r}")
        for penalty in penalties:
            normalized = penalty if kind == "logreg" else _PENALTIES[kind][0]
            for c in cs:
                for cw in class_weights:
                    key = (kind, normalized, float(c), cw)
                    if key in seen:
                        continue
                    seen.add(key)
                    configs.append(
                        ModelConfig(
                            kind=kind, penalty=normalized, C=float(c), class_weight=cw
                        )
                    )
    if not configs:
        raise ValueError("grid is empty")
    return tuple(configs)


@dataclass(frozen=True)
class PipelineModel:
    """Self-contained trained pipeline: tagger, lexicon, feature state, and
    the classifier, everything prediction needs in one artifact."""

    tagger: TagModel
    lexicon: SentimentLexicon
    fitted: FittedFeatures
    model: LinearModel
    config: ModelConfig


def pipeline_predict(pm: PipelineModel, texts) -> tuple[np.ndarray, np.ndarray]:
    """Labels (class codes) and per-class scores for raw texts."""
    texts = list(texts)
    if not texts:
        return np.zeros(0, dtype=np.int64), np.zeros((0, len(pm.model.classes)))
    ingredients = extract_ingredients(texts, pm.tagger, pm.lexicon)
    fm = model_input_matrix(pm.config.kind, pm.fitted, ingredients)
    return predict(pm.model, fm), predict_scores(pm.model, fm)


def _vocab_payload(v: Vocabulary) -> dict:
    ordered = v.ordered_ngrams()
    return {
        "ngrams": ordered,
        "df": [v.df[t] for t in ordered],
        "n_docs": v.n_docs,
        "n_lo": v.n_lo,
        "n_hi": v.n_hi,
        "min_df": v.min_df,
        "max_df_ratio": v.max_df_ratio,
    }


def _vocab_from_payload(d: dict) -> Vocabulary:
    ngrams = list(d["ngrams"])
    return Vocabulary(
        index={t: i for i, t in enumerate(ngrams)},
        df=dict(zip(ngrams, d["df"])),
        n_docs=int(d["n_docs"]),
        n_lo=int(d["n_lo"]),
        n_hi=int(d["n_hi"]),
        min_df=int(d["min_df"]),
        max_df_ratio=float(d["max_df_ratio"]),
    )


def _settings_payload(s: FeatureSettings) -> dict:
    return {
        "word_ngram_lo": s.word_ngram_lo,
        "word_ngram_hi": s.word_ngram_hi,
        "pos_ngram_lo": s.pos_ngram_lo,
        "pos_ngram_hi": s.pos_ngram_hi,
        "min_df": s.min_df,
        "max_df_ratio": s.max_df_ratio,
        "standardize": s.standardize,
        "select": s.select,
        "select_c": s.select_c,
        "select_tol": s.select_tol,
    }


def save_pipeline(pm: PipelineModel) -> bytes:
    fitted = pm.fitted
    payload = {
        "tagger": save_tag_model(pm.tagger).decode("utf-8"),
        "lexicon": dict(pm.lexicon.valences),
        "word_vocab": _vocab_payload(fitted.word_vocab),
        "pos_vocab": _vocab_payload(fitted.pos_vocab),
        "standardizer": None
        if fitted.standardizer is None
        else {
            "means": list(fitted.standardizer.means),
            "scales": list(fitted.standardizer.scales),
        },
        "selected_columns": None
        if fitted.selected_columns is None
        else list(fitted.selected_columns),
        "registry": [list(entry) for entry in fitted.registry],
        "settings": _settings_payload(fitted.settings),
        "config": {
            "kind": pm.config.kind,
            "penalty": pm.config.penalty,
            "C": pm.config.C,
            "class_weight": pm.config.class_weight,
        },
        "model": model_payload(pm.model),
    }
    return dump_artifact(PIPELINE_MAGIC, PIPELINE_FORMAT_VERSION, payload)


def load_pipeline(data: bytes) -> PipelineModel:
    payload = load_artifact(data, PIPELINE_MAGIC, PIPELINE_FORMAT_VERSION)
    std = payload["standardizer"]
    fitted = FittedFeatures(
        settings=FeatureSettings(**payload["settings"]),
        word_vocab=_vocab_from_payload(payload["word_vocab"]),
        pos_vocab=_vocab_from_payload(payload["pos_vocab"]),
        standardizer=None
        if std is None
        else Standardizer(means=tuple(std["means"]), scales=tuple(std["scales"])),
        selected_columns=None
        if payload["selected_columns"] is None
        else tuple(payload["selected_columns"]),
        registry=tuple((b, n) for b, n in payload["registry"]),
    )
    model, _ = model_from_payload(payload["model"])
    cfg = payload["config"]
    return PipelineModel(
        tagger=load_tag_model(payload["tagger"].encode("utf-8")),
        lexicon=SentimentLexicon(valences=dict(payload["lexicon"])),
        fitted=fitted,
        model=model,
        config=ModelConfig(
            kind=cfg["kind"],
            penalty=cfg["penalty"],
            C=float(cfg["C"]),
            class_weight=cfg["class_weight"],
        ),
    )
