"""Linear SVM training: one-vs-one and one-vs-all reductions over a
deterministic hinge-loss subgradient solver, plus randomized hyperparameter
search."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset, SplitSpec, split


@dataclass(frozen=True)
class Hyper:
    lam: float = 0.01
    epochs: int = 20
    seed: int = 0


@dataclass(frozen=True)
class SearchSpace:
    lam_lo: float = 1e-4
    lam_hi: float = 10.0
    epochs_lo: int = 5
    epochs_hi: int = 50


@dataclass
class SupportVector:
    class_a: int
    class_b: int | None  # None for one-vs-all vectors
    weights: np.ndarray
    bias: float


@dataclass
class FloatSvmModel:
    kind: str  # "ovo" | "ova"
    n_classes: int
    n_features: int
    vectors: list[SupportVector]

    def __post_init__(self):
        n = self.n_classes
        expected = n * (n - 1) // 2 if self.kind == "ovo" else n
        if len(self.vectors) != expected:
            raise ValueError(f"{self.kind} model needs {expected} vectors, got {len(self.vectors)}")

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Class per row: max-wins voting for OvO, argmax score for OvA.

        Ties break toward the lowest class id.
        """
        X = np.asarray(features, dtype=np.float64)
        if self.kind == "ovo":
            votes = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
            for vec in self.vectors:
                a_wins = X @ vec.weights + vec.bias >= 0.0
                votes[a_wins, vec.class_a] += 1
                votes[~a_wins, vec.class_b] += 1
            return np.argmax(votes, axis=1)
        scores = np.column_stack([X @ v.weights + v.bias for v in self.vectors])
        return np.argmax(scores, axis=1)


@dataclass
class BinaryFit:
    weights: np.ndarray
    bias: float
    degenerate: bool
    train_accuracy: float


def _hinge_sgd(X: np.ndarray, y: np.ndarray, lam: float, epochs: int, rng) -> tuple[np.ndarray, float]:
    """Subgradient descent on the L2-regularized hinge loss, step 1/(lam*t).

    The bias rides along as an augmented constant-one feature so it shares the
    regularizer and the update stays a single shrink-and-step.
    """
    Xa = np.hstack([X, np.ones((X.shape[0], 1))])
    w = np.zeros(Xa.shape[1])
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(len(y)):
            t += 1
            shrink = 1.0 - 1.0 / t  # equals 1 - eta*lam
            if y[i] * float(Xa[i] @ w) < 1.0:
                w = shrink * w + (y[i] / (lam * t)) * Xa[i]
            else:
                w = shrink * w
    return w[:-1], float(w[-1])


def train_binary(ds: Dataset, class_a: int, class_b: int, hyper: Hyper) -> BinaryFit:
    """Fit the pairwise separator for class_a (+1) vs class_b (-1).

    Deterministic for a given (seed, class pair). A degenerate pair (every
    feature row identical) yields zero weights and a bias whose sign picks the
    majority class.
    """
    if class_a >= class_b:
        raise ValueError("expects class_a < class_b")
    mask = (ds.labels == class_a) | (ds.labels == class_b)
    X = ds.features[mask]
    y = np.where(ds.labels[mask] == class_a, 1.0, -1.0)
    if len(np.unique(y)) < 2:
        raise ValueError(f"pair ({class_a},{class_b}): a class is missing from the training set")

    if bool(np.all(X == X[0])):
        bias = 1.0 if np.count_nonzero(y > 0) >= np.count_nonzero(y < 0) else -1.0
        pred = np.where(bias >= 0.0, 1.0, -1.0)
        return BinaryFit(np.zeros(ds.n_features), bias, True, float(np.mean(pred == y)))

    rng = np.random.default_rng([hyper.seed, class_a, class_b])
    w, b = _hinge_sgd(X, y, hyper.lam, hyper.epochs, rng)
    pred = np.where(X @ w + b >= 0.0, 1.0, -1.0)
    return BinaryFit(w, b, False, float(np.mean(pred == y)))


def _train_one_vs_rest(ds: Dataset, cls: int, hyper: Hyper) -> BinaryFit:
    X = ds.features
    y = np.where(ds.labels == cls, 1.0, -1.0)
    if bool(np.all(X == X[0])):
        bias = 1.0 if np.count_nonzero(y > 0) >= np.count_nonzero(y < 0) else -1.0
        pred = np.where(bias >= 0.0, 1.0, -1.0)
        return BinaryFit(np.zeros(ds.n_features), bias, True, float(np.mean(pred == y)))
    rng = np.random.default_rng([hyper.seed, cls])
    w, b = _hinge_sgd(X, y, hyper.lam, hyper.epochs, rng)
    pred = np.where(X @ w + b >= 0.0, 1.0, -1.0)
    return BinaryFit(w, b, False, float(np.mean(pred == y)))


def train_ovo(ds: Dataset, hyper: Hyper) -> FloatSvmModel:
    """One binary fit per unordered class pair, assembled in lexicographic order."""
    n = ds.n_classes
    vectors = []
    for a in range(n):
        for b in range(a + 1, n):
            try:
                fit = train_binary(ds, a, b, hyper)
            except Exception as exc:
                raise RuntimeError(f"pair ({a},{b}) failed: {exc}") from exc
            vectors.append(SupportVector(a, b, fit.weights, fit.bias))
    return FloatSvmModel("ovo", n, ds.n_features, vectors)


def train_ova(ds: Dataset, hyper: Hyper) -> FloatSvmModel:
    """One binary fit per class against the rest (comparison harness only)."""
    n = ds.n_classes
    vectors = []
    for cls in range(n):
        fit = _train_one_vs_rest(ds, cls, hyper)
        vectors.append(SupportVector(cls, None, fit.weights, fit.bias))
    return FloatSvmModel("ova", n, ds.n_features, vectors)


def accuracy(model, ds: Dataset) -> float:
    """Fraction of samples classified correctly; model is anything with
    predict(features) or a callable doing the same."""
    predict = model.predict if hasattr(model, "predict") else model
    pred = np.asarray(predict(ds.features))
    if pred.shape != ds.labels.shape:
        raise ValueError("prediction/label shape mismatch")
    return float(np.mean(pred == ds.labels))


def random_search(
    train: Dataset,
    space: SearchSpace = SearchSpace(),
    budget: int = 8,
    seed: int = 0,
    holdout_fraction: float = 0.25,
) -> Hyper:
    """Sample (lam, epochs) pairs and keep the best holdout accuracy.

    Deterministic for a given seed; ties break toward smaller lam, then fewer
    epochs. lam is sampled log-uniformly.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng([seed, 99])
    lams = 10.0 ** rng.uniform(np.log10(space.lam_lo), np.log10(space.lam_hi), budget)
    epoch_counts = rng.integers(space.epochs_lo, space.epochs_hi + 1, budget)

    sub_train, holdout = split(train, SplitSpec(1.0 - holdout_fraction, seed))
    best: tuple | None = None
    best_hyper = None
    for lam, epochs in zip(lams.tolist(), epoch_counts.tolist()):
        hyper = Hyper(lam=lam, epochs=int(epochs), seed=seed)
        model = train_ovo(sub_train, hyper)
        key = (-accuracy(model, holdout), lam, epochs)
        if best is None or key < best:
            best = key
            best_hyper = hyper
    return best_hyper
