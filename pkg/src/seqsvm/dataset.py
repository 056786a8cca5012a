"""CSV ingestion and deterministic train/test splitting with min-max
normalization derived from the training side only."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Dataset:
    """Feature matrix plus dense integer labels.

    ``labels`` index into ``label_names``; ``normalization`` holds the
    per-feature (min, max) pairs once a split has fixed them, at which point
    all feature values lie in [0, 1].
    """

    features: np.ndarray
    labels: np.ndarray
    label_names: list[str]
    feature_names: list[str] | None = None
    normalization: list[tuple[float, float]] | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[1] < 1:
            raise ValueError("features must be a (samples, >=1 feature) matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels length must match the number of samples")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite values")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")


def _label_sort_key(labels: set[str]):
    try:
        values = {lab: float(lab) for lab in labels}
        return lambda lab: values[lab]
    except ValueError:
        return lambda lab: lab


def load_csv(path, label_column: str) -> Dataset:
    """Load a headered CSV, re-indexing the label column densely to 0..n-1.

    Rejects ragged rows, non-numeric feature cells, and single-class files.
    Normalization constants are NOT computed here; split() derives them from
    its training side.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise ValueError(f"{path}: no column named {label_column!r}")
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            raw_labels.append(row[label_idx].strip())
            feats = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    feats.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: non-numeric feature value {cell!r} in column {header[i]!r}"
                    ) from None
            rows.append(feats)

    if not rows:
        raise ValueError(f"{path}: no data rows")
    uniq = set(raw_labels)
    if len(uniq) < 2:
        raise ValueError(f"{path}: need at least two classes, found {len(uniq)}")
    label_names = sorted(uniq, key=_label_sort_key(uniq))
    index = {name: i for i, name in enumerate(label_names)}
    labels = np.array([index[lab] for lab in raw_labels], dtype=np.int64)
    return Dataset(np.array(rows), labels, label_names, feature_names)


def _stratified_indices(labels: np.ndarray, fraction: float, seed: int):
    # Per-class shuffle; every class keeps at least one training sample.
    rng = np.random.default_rng([seed, 1])
    train, test = [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        k = max(1, int(round(len(idx) * fraction)))
        k = min(k, len(idx))
        train.extend(idx[:k])
        test.extend(idx[k:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Seeded disjoint partition; (min, max) per feature come from train only.

    Falls back to a stratified partition when the plain shuffle would leave a
    class without training samples. Test features are clamped to [0, 1] after
    applying the training normalization.
    """
    n = ds.n_samples
    rng = np.random.default_rng(spec.seed)
    order = rng.permutation(n)
    n_train = int(round(n * spec.train_fraction))
    n_train = min(max(n_train, 1), n - 1)
    train_idx, test_idx = np.sort(order[:n_train]), np.sort(order[n_train:])

    present = np.unique(ds.labels)
    if len(np.unique(ds.labels[train_idx])) < len(present):
        train_idx, test_idx = _stratified_indices(ds.labels, spec.train_fraction, spec.seed)
        if len(test_idx) == 0:
            raise ValueError(
                "split leaves no test samples even after stratification; "
                "increase the dataset size or lower train_fraction"
            )
    if len(np.unique(ds.labels[train_idx])) < len(present):
        raise ValueError(
            "split leaves a class without training samples; "
            "stratification failed (class with zero samples?)"
        )

    x_train = ds.features[train_idx]
    x_test = ds.features[test_idx]
    mins = x_train.min(axis=0)
    maxs = x_train.max(axis=0)
    span = maxs - mins
    span[span == 0.0] = 1.0  # constant feature maps to 0

    norm = list(zip(mins.tolist(), maxs.tolist()))
    x_train = (x_train - mins) / span
    x_test = np.clip((x_test - mins) / span, 0.0, 1.0)

    train = Dataset(x_train, ds.labels[train_idx], ds.label_names, ds.feature_names, norm)
    test = Dataset(x_test, ds.labels[test_idx], ds.label_names, ds.feature_names, norm)
    return train, test


def apply_normalization(features: np.ndarray, norm: list[tuple[float, float]]) -> np.ndarray:
    """Re-apply recorded (min, max) pairs to a raw feature matrix, clamped to [0, 1]."""
    mins = np.array([lo for lo, _ in norm])
    span = np.array([hi - lo for lo, hi in norm])
    span[span == 0.0] = 1.0
    return np.clip((np.asarray(features, dtype=np.float64) - mins) / span, 0.0, 1.0)


def to_csv(ds: Dataset, path) -> None:
    """Write the dataset back out as a headered CSV with a final label column."""
    names = ds.feature_names or [f"f{i}" for i in range(ds.n_features)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["label"])
        for row, lab in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [ds.label_names[lab]])
