"""N-gram vocabularies, TF-IDF blocks, feature assembly, and L1 selection.

Conventions fixed here: idf(t) = ln((1 + n_docs)/(1 + df(t))) + 1 with raw
term counts, rows L2-normalized after weighting; vocabulary indices follow
lexicographic ngram order so fitted artifacts are deterministic. Scalar
blocks are standardized to train-set mean 0 / variance 1 with the transform
stored for predict time; a zero-variance column is centered to all zeros
without dividing.

Count-mode transforms (raw tf, no idf, no normalization) are also provided;
the naive Bayes model consumes those.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

COEF_KEEP_THRESHOLD = 1e-6

SENTIMENT_NAMES = ("pos", "neg", "neu", "compound")
READABILITY_NAMES = ("fk_grade", "reading_ease")
SURFACE_NAMES = (
    "count_hashtags",
    "count_mentions",
    "count_retweets",
    "count_urls",
    "has_hashtag",
    "has_mention",
    "has_retweet",
    "has_url",
    "num_chars",
    "num_words",
    "num_syllables",
)
SCALAR_WIDTH = len(SENTIMENT_NAMES) + len(READABILITY_NAMES) + len(SURFACE_NAMES)


@dataclass(frozen=True)
class Vocabulary:
    index: dict[str, int]
    df: dict[str, int]
    n_docs: int
    n_lo: int
    n_hi: int
    min_df: int
    max_df_ratio: float

    def __len__(self) -> int:
        return len(self.index)

    def idf(self, ngram: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.df[ngram])) + 1.0

    def ordered_ngrams(self) -> list[str]:
        out = [""] * len(self.index)
        for ngram, col in self.index.items():
            out[col] = ngram
        return out


@dataclass
class FeatureMatrix:
    matrix: sparse.csr_matrix
    registry: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if not sparse.issparse(self.matrix):
            self.matrix = sparse.csr_matrix(np.asarray(self.matrix, dtype=np.float64))
        self.matrix = self.matrix.tocsr().astype(np.float64)
        self.matrix.sum_duplicates()
        self.matrix.sort_indices()
        if len(self.registry) != self.matrix.shape[1]:
            raise ValueError(
                f"registry length {len(self.registry)} != n_cols {self.matrix.shape[1]}"
            )

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.matrix.shape[1]

    def project(self, columns: list[int]) -> "FeatureMatrix":
        """Restrict to the given columns, keeping registry names aligned."""
        cols = list(columns)
        if any(c < 0 or c >= self.n_cols for c in cols):
            raise ValueError("projection column out of range")
        return FeatureMatrix(
            matrix=self.matrix[:, cols].tocsr(),
            registry=[self.registry[c] for c in cols],
        )


def _ngrams(doc: list[str], n_lo: int, n_hi: int):
    for n in range(n_lo, n_hi + 1):
        for i in range(len(doc) - n + 1):
            yield " ".join(doc[i : i + n])


def fit_vocab(
    docs: list[list[str]], n_lo: int, n_hi: int, min_df: int, max_df_ratio: float
) -> Vocabulary:
    """Collect ngrams of orders n_lo..n_hi, filter by document frequency,
    and assign dense indices in lexicographic order."""
    if not 1 <= n_lo <= n_hi:
        raise ValueError("require 1 <= n_lo <= n_hi")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if not 0.0 < max_df_ratio <= 1.0:
        raise ValueError("max_df_ratio must lie in (0, 1]")
    if not docs:
        raise ValueError("fit_vocab requires a non-empty corpus")
    df: dict[str, int] = {}
    for doc in docs:
        for ngram in set(_ngrams(doc, n_lo, n_hi)):
            df[ngram] = df.get(ngram, 0) + 1
    max_df = max_df_ratio * len(docs)
    kept = sorted(t for t, d in df.items() if min_df <= d <= max_df)
    if not kept:
        raise ValueError(
            "document-frequency bounds left an empty vocabulary; lower min_df "
            "or raise max_df_ratio"
        )
    return Vocabulary(
        index={t: i for i, t in enumerate(kept)},
        df={t: df[t] for t in kept},
        n_docs=len(docs),
        n_lo=n_lo,
        n_hi=n_hi,
        min_df=min_df,
        max_df_ratio=max_df_ratio,
    )


def _count_matrix(vocab: Vocabulary, docs: list[list[str]]) -> sparse.csr_matrix:
    data, indices, indptr = [], [], [0]
    for doc in docs:
        counts: dict[int, float] = {}
        for ngram in _ngrams(doc, vocab.n_lo, vocab.n_hi):
            col = vocab.index.get(ngram)
            if col is not None:
                counts[col] = counts.get(col, 0.0) + 1.0
        for col in sorted(counts):
            indices.append(col)
            data.append(counts[col])
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int32), np.array(indptr, dtype=np.int32)),
        shape=(len(docs), len(vocab)),
    )


def transform_counts(vocab: Vocabulary, docs: list[list[str]], block: str = "word-ngram") -> FeatureMatrix:
    """Raw term counts; unknown ngrams ignored."""
    return FeatureMatrix(
        matrix=_count_matrix(vocab, docs),
        registry=[(block, t) for t in vocab.ordered_ngrams()],
    )


def transform_tfidf(vocab: Vocabulary, docs: list[list[str]], block: str = "word-ngram") -> FeatureMatrix:
    """tf * idf with smoothed idf, then exact row L2 normalization."""
    m = _count_matrix(vocab, docs)
    idf = np.array([vocab.idf(t) for t in vocab.ordered_ngrams()], dtype=np.float64)
    if len(vocab):
        m = m.multiply(sparse.csr_matrix(idf)).tocsr()
    norms = np.sqrt(np.asarray(m.multiply(m).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    m = sparse.diags(scale).dot(m).tocsr()
    return FeatureMatrix(matrix=m, registry=[(block, t) for t in vocab.ordered_ngrams()])


@dataclass(frozen=True)
class Standardizer:
    """Stored mean/scale transform for the scalar feature columns."""

    means: tuple[float, ...]
    scales: tuple[float, ...]

    def apply(self, scalars: np.ndarray) -> np.ndarray:
        means = np.array(self.means)
        scales = np.array(self.scales)
        if scalars.shape[1] != means.shape[0]:
            raise ValueError("scalar width does not match the stored transform")
        return (scalars - means) / scales

    @classmethod
    def fit(cls, scalars: np.ndarray) -> "Standardizer":
        means = scalars.mean(axis=0)
        variances = scalars.var(axis=0)
        # zero-variance columns center to zero without dividing
        scales = np.where(variances > 0, np.sqrt(variances), 1.0)
        return cls(means=tuple(float(v) for v in means), scales=tuple(float(v) for v in scales))


def _scalar_rows(sentiment, readability, surface) -> np.ndarray:
    s = np.asarray(sentiment, dtype=np.float64)
    r = np.asarray(readability, dtype=np.float64)
    f = np.asarray(surface, dtype=np.float64)
    for arr, width, name in ((s, 4, "sentiment"), (r, 2, "readability"), (f, 11, "surface")):
        if arr.ndim != 2 or arr.shape[1] != width:
            raise ValueError(f"{name} rows must have width {width}")
    if not (s.shape[0] == r.shape[0] == f.shape[0]):
        raise ValueError("scalar blocks disagree on row count")
    return np.hstack([s, r, f])


def assemble_features(
    word_block: FeatureMatrix,
    pos_block: FeatureMatrix,
    sentiment,
    readability,
    surface,
    standardizer: Standardizer | None = None,
    standardize: bool = True,
) -> tuple[FeatureMatrix, Standardizer | None]:
    """Concatenate [word | pos | sentiment | readability | surface].

    With standardize on and no stored transform, fits one on these rows
    (train mode); a provided transform is applied as-is (predict mode).
    Returns the matrix and the transform used (None when off).
    """
    scalars = _scalar_rows(sentiment, readability, surface)
    n_rows = scalars.shape[0]
    if word_block.n_rows != n_rows or pos_block.n_rows != n_rows:
        raise ValueError(
            f"row-count mismatch: word {word_block.n_rows}, pos {pos_block.n_rows}, "
            f"scalars {n_rows}"
        )
    if standardize:
        if standardizer is None:
            standardizer = Standardizer.fit(scalars)
        scalars = standardizer.apply(scalars)
    else:
        standardizer = None
    registry = (
        [("word-ngram", name) for _, name in word_block.registry]
        + [("pos-ngram", name) for _, name in pos_block.registry]
        + [("sentiment", n) for n in SENTIMENT_NAMES]
        + [("readability", n) for n in READABILITY_NAMES]
        + [("surface", n) for n in SURFACE_NAMES]
    )
    matrix = sparse.hstack(
        [word_block.matrix, pos_block.matrix, sparse.csr_matrix(scalars)], format="csr"
    )
    return FeatureMatrix(matrix=matrix, registry=registry), standardizer


def select_l1(X: FeatureMatrix, y, C: float, tol: float) -> list[int]:
    """Columns kept by an OvR L1 logistic fit: any class coefficient with
    magnitude above 1e-6 retains the column."""
    from .linmodel import fit_logreg  # local import, linmodel depends on this module

    model = fit_logreg(X, y, penalty="l1", C=C, class_weight="uniform", tol=tol)
    keep = sorted(
        int(j)
        for j in np.nonzero(np.abs(model.weights).max(axis=0) > COEF_KEEP_THRESHOLD)[0]
    )
    if not keep:
        raise ValueError(
            f"L1 selection at C={C} zeroed every column; increase C to keep features"
        )
    return keep


def registry_csv(fm: FeatureMatrix) -> str:
    """Feature registry as CSV (index, block, name)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["index", "block", "name"])
    for i, (block, name) in enumerate(fm.registry):
        w.writerow([i, block, name])
    return out.getvalue()
