"""Bundled desk-scale synthetic datasets.

Three generators (cleanly separable blobs, overlapping noisy blobs, and
ring-sector data that tends to produce intransitive pairwise comparisons),
instantiated at shapes mirroring common sensor benchmarks. Nothing here is
normalized; the split step owns normalization.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset


def _finish(X: np.ndarray, labels: np.ndarray, n_classes: int) -> Dataset:
    return Dataset(X, labels, [str(c) for c in range(n_classes)])


def separable_blobs(n_classes: int, n_features: int, per_class: int = 40, seed: int = 0) -> Dataset:
    """Tight Gaussian blobs around well-separated random centers."""
    rng = np.random.default_rng([seed, n_classes, n_features, 1])
    centers = rng.uniform(0.15, 0.85, size=(n_classes, n_features))
    labels = np.repeat(np.arange(n_classes), per_class)
    X = centers[labels] + rng.normal(0.0, 0.03, size=(len(labels), n_features))
    return _finish(X, labels, n_classes)


def noisy_blobs(n_classes: int, n_features: int, per_class: int = 40, seed: int = 0) -> Dataset:
    """Blobs with heavy overlap; accuracies stay well below 1."""
    rng = np.random.default_rng([seed, n_classes, n_features, 2])
    centers = rng.uniform(0.2, 0.8, size=(n_classes, n_features))
    labels = np.repeat(np.arange(n_classes), per_class)
    X = centers[labels] + rng.normal(0.0, 0.16, size=(len(labels), n_features))
    return _finish(X, labels, n_classes)


def ring_sectors(n_classes: int, n_features: int, per_class: int = 40, seed: int = 0) -> Dataset:
    """Classes on overlapping angular sectors of a ring.

    Pairwise linear separators work locally but their joint verdicts are
    prone to cycles, exercising the DAG-vs-vote disagreement paths.
    """
    if n_features < 2:
        raise ValueError("ring data needs at least two features")
    rng = np.random.default_rng([seed, n_classes, n_features, 3])
    labels = np.repeat(np.arange(n_classes), per_class)
    sector = 2.0 * np.pi / n_classes
    theta = labels * sector + rng.uniform(-0.75 * sector, 0.75 * sector, size=len(labels))
    radius = rng.normal(1.0, 0.12, size=len(labels))
    X = np.empty((len(labels), n_features))
    X[:, 0] = radius * np.cos(theta)
    X[:, 1] = radius * np.sin(theta)
    if n_features > 2:
        X[:, 2] = 0.35 * np.cos(2.0 * theta) + rng.normal(0.0, 0.1, size=len(labels))
    for j in range(3, n_features):
        X[:, j] = rng.normal(0.5, 0.15, size=len(labels))
    return _finish(X, labels, n_classes)


#: name -> (generator, n_classes, n_features, samples per class)
BUNDLED = {
    "blobs3x21": (separable_blobs, 3, 21, 60),
    "blobs6x33": (separable_blobs, 6, 33, 40),
    "rings10x17": (ring_sectors, 10, 17, 35),
    "noisy6x11": (noisy_blobs, 6, 11, 50),
    "noisy7x11": (noisy_blobs, 7, 11, 45),
}


def bundled_dataset(name: str, seed: int = 0) -> Dataset:
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled dataset {name!r}; have {sorted(BUNDLED)}")
    gen, n, m, per_class = BUNDLED[name]
    return gen(n, m, per_class, seed)
