"""From-scratch one-vs-rest linear classifiers.

Per class k the solvers minimize the mean regularized objective

    J_k(w, b) = (1/n) sum_i omega_i * loss(z_i, x_i.w + b) + R(w)

with z in {-1, +1} for the one-vs-rest split, R(w) = ||w||_1 / (C n) for the
L1 penalty or ||w||_2^2 / (2 C n) for L2, and the bias unpenalized. Balanced
sample weights are omega_i = n / (K * n_class(i)). This scaling gives C its
conventional meaning: multiplying through by C n recovers the usual
"penalty + C * summed loss" form.

Solvers: L2 problems (logistic loss, squared hinge) run limited-memory BFGS
with Armijo backtracking, stopping at ||grad J||_inf <= tol. L1 logistic
runs proximal gradient descent (soft-threshold steps on w, plain steps on b)
with backtracking, stopping when an accepted step moves no parameter by more
than tol. Both are deterministic from a zero start; the seed argument is
accepted for interface stability but nothing is randomized.

Model files: "linmodel <version> <payload-bytes>" header line followed by a
canonical JSON object holding classes, loss, penalty, C, weights, bias,
selected columns, standardization parameters, and per-class training
metadata. Loading reproduces predictions bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.special import expit

from ._serialize import ArtifactFormatError, dump_artifact, load_artifact
from .vectorize import FeatureMatrix, Standardizer

MAGIC = "linmodel"
FORMAT_VERSION = 1

DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 1000
DEFAULT_SEED = 42

_LBFGS_MEMORY = 10
_ARMIJO_C1 = 1e-4
_BACKTRACK = 0.5
_MAX_LINE_STEPS = 60


@dataclass(frozen=True)
class TrainMeta:
    iterations: int
    objective: float
    converged: bool
    # objective value at the start plus after each accepted step; kept for
    # diagnostics and invariant checks, not serialized
    history: tuple[float, ...] = ()


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # (K, D)
    bias: np.ndarray  # (K,)
    classes: tuple[int, ...]
    loss: str  # logistic | hinge | nb
    penalty: str  # l1 | l2 | none
    C: float
    selected_columns: tuple[int, ...] | None = None
    train_meta: tuple[TrainMeta, ...] = ()

    def __post_init__(self):
        if self.weights.shape[0] != len(self.classes) or self.bias.shape[0] != len(self.classes):
            raise ValueError("weights/bias rows must match the class count")
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("model parameters must be finite")

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def converged(self) -> bool:
        return all(m.converged for m in self.train_meta) if self.train_meta else True


def _as_csr(X) -> sparse.csr_matrix:
    if isinstance(X, FeatureMatrix):
        return X.matrix
    if sparse.issparse(X):
        return X.tocsr().astype(np.float64)
    return sparse.csr_matrix(np.asarray(X, dtype=np.float64))


def _as_labels(y) -> np.ndarray:
    arr = np.asarray([int(v) for v in y], dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("y must be one-dimensional")
    return arr


def _sample_weights(y: np.ndarray, classes: np.ndarray, class_weight: str) -> np.ndarray:
    if class_weight == "uniform":
        return np.ones(y.shape[0])
    if class_weight != "balanced":
        raise ValueError(f"unknown class_weight {class_weight!r}")
    n = y.shape[0]
    k = classes.shape[0]
    counts = {c: int((y == c).sum()) for c in classes}
    return np.array([n / (k * counts[int(v)]) for v in y])


def _check_fit_inputs(X: sparse.csr_matrix, y: np.ndarray) -> np.ndarray:
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError("X must be non-empty")
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} labels")
    classes = np.unique(y)
    if classes.shape[0] < 2:
        raise ValueError("training requires at least two classes in y")
    return classes


def _logistic_loss_grad(Xc, z, omega, n, w, b):
    margins = Xc.dot(w) + b
    u = z * margins
    value = float((omega * np.logaddexp(0.0, -u)).sum() / n)
    coef = (omega * (-z) * expit(-u)) / n
    return value, Xc.T.dot(coef), float(coef.sum())

def _squared_hinge_loss_grad(Xc, z, omega, n, w, b):
    margins = Xc.dot(w) + b
    gap = np.maximum(0.0, 1.0 - z * margins)
    value = float((omega * gap * gap).sum() / n)
    coef = (omega * 2.0 * gap * (-z)) / n
    return value, Xc.T.dot(coef), float(coef.sum())


def _lbfgs_l2(loss_grad, Xc, z, omega, reg, tol, max_iter):
    """Limited-memory BFGS with Armijo backtracking on the L2 objective.

    theta stacks (w, b); the penalty reg/2 * ||w||^2 leaves b alone.
    """
    n_features = Xc.shape[1]
    n = Xc.shape[0]
    theta = np.zeros(n_features + 1)

    def objective(th):
        loss, gw, gb = loss_grad(Xc, z, omega, n, th[:-1], th[-1])
        value = loss + 0.5 * reg * float(th[:-1] @ th[:-1])
        grad = np.concatenate([gw + reg * th[:-1], [gb]])
        return value, grad

    f, g = objective(theta)
    history = [f]
    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    rho_hist: list[float] = []
    iterations = 0
    converged = bool(np.abs(g).max() <= tol)
    while not converged and iterations < max_iter:
        iterations += 1
        # two-loop recursion for the search direction
        q = g.copy()
        alphas = []
        for s, yv, rho in zip(reversed(s_hist), reversed(y_hist), reversed(rho_hist)):
            a = rho * (s @ q)
            alphas.append(a)
            q -= a * yv
        if y_hist:
            gamma = (s_hist[-1] @ y_hist[-1]) / (y_hist[-1] @ y_hist[-1])
            q *= gamma
        for (s, yv, rho), a in zip(zip(s_hist, y_hist, rho_hist), reversed(alphas)):
            beta = rho * (yv @ q)
            q += (a - beta) * s
        direction = -q
        descent = float(direction @ g)
        if descent >= 0.0:
            direction = -g
            descent = float(direction @ g)

        step = 1.0 if y_hist else min(1.0, 1.0 / max(np.abs(g).max(), 1e-12))
        accepted = False
        for _ in range(_MAX_LINE_STEPS):
            candidate = theta + step * direction
            f_new, g_new = objective(candidate)
            if f_new <= f + _ARMIJO_C1 * step * descent:
                accepted = True
                break
            step *= _BACKTRACK
        if not accepted:
            break  # line search stalled at numerical precision
        s_vec = candidate - theta
        y_vec = g_new - g
        sy = float(s_vec @ y_vec)
        if sy > 1e-10:
            s_hist.append(s_vec)
            y_hist.append(y_vec)
            rho_hist.append(1.0 / sy)
            if len(s_hist) > _LBFGS_MEMORY:
                s_hist.pop(0)
                y_hist.pop(0)
                rho_hist.pop(0)
        theta, f, g = candidate, f_new, g_new
        history.append(f)
        converged = bool(np.abs(g).max() <= tol)
    return theta[:-1], float(theta[-1]), TrainMeta(iterations, f, converged, tuple(history))


def _soft_threshold(v: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - threshold, 0.0)


def _prox_l1(Xc, z, omega, lam, tol, max_iter):
    """Proximal gradient descent for L1 logistic regression (monotone via
    backtracking on the smooth part)."""
    n = Xc.shape[0]
    w = np.zeros(Xc.shape[1])
    b = 0.0
    loss, gw, gb = _logistic_loss_grad(Xc, z, omega, n, w, b)
    history = [loss]
    step = 1.0
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        accepted = False
        for _ in range(_MAX_LINE_STEPS):
            w_new = _soft_threshold(w - step * gw, step * lam)
            b_new = b - step * gb
            dw = w_new - w
            db = b_new - b
            loss_new, gw_new, gb_new = _logistic_loss_grad(Xc, z, omega, n, w_new, b_new)
            quad = (
                loss
                + float(gw @ dw)
                + gb * db
                + (float(dw @ dw) + db * db) / (2.0 * step)
            )
            if loss_new <= quad + 1e-12:
                accepted = True
                break
            step *= _BACKTRACK
        if not accepted:
            break
        max_move = max(float(np.abs(dw).max(initial=0.0)), abs(db))
        w, b, loss, gw, gb = w_new, b_new, loss_new, gw_new, gb_new
        history.append(loss + lam * float(np.abs(w).sum()))
        if max_move <= tol:
            converged = True
            break
        step = min(step / _BACKTRACK, 1e6)  # let the step length recover
    objective = loss + lam * float(np.abs(w).sum())
    return w, b, TrainMeta(iterations, objective, converged, tuple(history))


def _fit_ovr(
    X,
    y,
    loss: str,
    penalty: str,
    C: float,
    class_weight: str,
    tol: float,
    max_iter: int,
) -> LinearModel:
    if C <= 0:
        raise ValueError("C must be positive")
    Xc = _as_csr(X)
    labels = _as_labels(y)
    classes = _check_fit_inputs(Xc, labels)
    omega = _sample_weights(labels, classes, class_weight)
    n = Xc.shape[0]
    reg = 1.0 / (C * n)

    weights = np.zeros((classes.shape[0], Xc.shape[1]))
    bias = np.zeros(classes.shape[0])
    meta = []
    for k, cls in enumerate(classes):
        z = np.where(labels == cls, 1.0, -1.0)
        if loss == "logistic" and penalty == "l1":
            w, b, info = _prox_l1(Xc, z, omega, reg, tol, max_iter)
        elif loss == "logistic":
            w, b, info = _lbfgs_l2(_logistic_loss_grad, Xc, z, omega, reg, tol, max_iter)
        elif loss == "hinge":
            w, b, info = _lbfgs_l2(_squared_hinge_loss_grad, Xc, z, omega, reg, tol, max_iter)
        else:
            raise ValueError(f"unknown loss {loss!r}")
        weights[k] = w
        bias[k] = b
        meta.append(info)
    return LinearModel(
        weights=weights,
        bias=bias,
        classes=tuple(int(c) for c in classes),
        loss=loss,
        penalty=penalty,
        C=C,
        train_meta=tuple(meta),
    )


def fit_logreg(
    X,
    y,
    penalty: str = "l2",
    C: float = 1.0,
    class_weight: str = "uniform",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> LinearModel:
    if penalty not in ("l1", "l2"):
        raise ValueError(f"unknown penalty {penalty!r}")
    return _fit_ovr(X, y, "logistic", penalty, C, class_weight, tol, max_iter)


def fit_linear_svm(
    X,
    y,
    C: float = 1.0,
    class_weight: str = "uniform",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> LinearModel:
    return _fit_ovr(X, y, "hinge", "l2", C, class_weight, tol, max_iter)


def fit_multinomial_nb(X, y, alpha: float = 1.0) -> LinearModel:
    """weights = log smoothed class-conditional probabilities, bias = log
    priors; scores are then unnormalized log-posteriors."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    Xc = _as_csr(X)
    labels = _as_labels(y)
    classes = _check_fit_inputs(Xc, labels)
    if Xc.nnz and Xc.data.min() < 0:
        raise ValueError("multinomial NB requires non-negative features")
    n, d = Xc.shape
    weights = np.zeros((classes.shape[0], d))
    bias = np.zeros(classes.shape[0])
    for k, cls in enumerate(classes):
        rows = labels == cls
        counts = np.asarray(Xc[np.nonzero(rows)[0]].sum(axis=0)).ravel()
        smoothed = counts + alpha
        total = counts.sum() + alpha * d
        if total <= 0 or (smoothed <= 0).any():
            raise ValueError(
                "log of zero probability; use alpha > 0 when classes have unseen features"
            )
        weights[k] = np.log(smoothed / total)
        bias[k] = np.log(rows.sum() / n)
    return LinearModel(
        weights=weights,
        bias=bias,
        classes=tuple(int(c) for c in classes),
        loss="nb",
        penalty="none",
        C=alpha,
        train_meta=(TrainMeta(iterations=1, objective=0.0, converged=True),) * classes.shape[0],
    )


def _project_for_model(model: LinearModel, X) -> sparse.csr_matrix:
    Xc = _as_csr(X)
    if Xc.shape[1] == model.n_features:
        return Xc
    if model.selected_columns is not None:
        cols = list(model.selected_columns)
        if Xc.shape[1] > max(cols):
            projected = Xc[:, cols]
            if projected.shape[1] == model.n_features:
                return projected.tocsr()
    raise ValueError(
        f"feature count {Xc.shape[1]} does not match the model ({model.n_features})"
    )


def decision_margins(model: LinearModel, X) -> np.ndarray:
    Xc = _project_for_model(model, X)
    return Xc.dot(model.weights.T) + model.bias


def predict_scores(model: LinearModel, X) -> np.ndarray:
    """Per-class scores: sigmoid margins (logistic), raw margins (hinge), or
    log-posteriors (nb). No cross-class normalization."""
    margins = decision_margins(model, X)
    if model.loss == "logistic":
        return expit(margins)
    return margins


def predict_scores_normalized(model: LinearModel, X) -> np.ndarray:
    """Reporting view: logistic scores divided by their row sum."""
    if model.loss != "logistic":
        raise ValueError("normalized scores are defined for logistic models only")
    scores = predict_scores(model, X)
    return scores / scores.sum(axis=1, keepdims=True)


def predict(model: LinearModel, X) -> np.ndarray:
    """Row-wise argmax over scores; ties go to the smallest class code."""
    scores = predict_scores(model, X)
    classes = np.asarray(model.classes)
    return classes[np.argmax(scores, axis=1)]


def model_payload(model: LinearModel, standardizer: Standardizer | None = None) -> dict:
    return {
        "classes": list(model.classes),
        "loss": model.loss,
        "penalty": model.penalty,
        "C": model.C,
        "weights": [[float(v) for v in row] for row in model.weights],
        "bias": [float(v) for v in model.bias],
        "selected_columns": (
            list(model.selected_columns) if model.selected_columns is not None else None
        ),
        "standardizer": (
            {"means": list(standardizer.means), "scales": list(standardizer.scales)}
            if standardizer is not None
            else None
        ),
        "train_meta": [
            {"iterations": m.iterations, "objective": m.objective, "converged": m.converged}
            for m in model.train_meta
        ],
    }


def model_from_payload(payload: dict) -> tuple[LinearModel, Standardizer | None]:
    try:
        model = LinearModel(
            weights=np.array(payload["weights"], dtype=np.float64).reshape(
                len(payload["classes"]), -1
            ),
            bias=np.array(payload["bias"], dtype=np.float64),
            classes=tuple(int(c) for c in payload["classes"]),
            loss=payload["loss"],
            penalty=payload["penalty"],
            C=float(payload["C"]),
            selected_columns=(
                tuple(int(c) for c in payload["selected_columns"])
                if payload["selected_columns"] is not None
                else None
            ),
            train_meta=tuple(
                TrainMeta(int(m["iterations"]), float(m["objective"]), bool(m["converged"]))
                for m in payload["train_meta"]
            ),
        )
    except (KeyError, TypeError) as err:
        raise ArtifactFormatError(f"model payload missing field: {err}") from None
    std = payload.get("standardizer")
    standardizer = (
        Standardizer(means=tuple(std["means"]), scales=tuple(std["scales"]))
        if std is not None
        else None
    )
    return model, standardizer


def save_model(model: LinearModel, standardizer: Standardizer | None = None) -> bytes:
    return dump_artifact(MAGIC, FORMAT_VERSION, model_payload(model, standardizer))


def load_model(data: bytes) -> tuple[LinearModel, Standardizer | None]:
    return model_from_payload(load_artifact(data, MAGIC, FORMAT_VERSION))
