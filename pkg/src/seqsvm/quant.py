"""Post-training quantization: 4-bit input truncation, per-vector min-max
scaling of weights and biases to the smallest precision that keeps accuracy,
and accumulator-width profiling."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .ddag import Ddag, build_ddag, ddag_predict_float, ddag_predict_quant
from .fxp import U4_4, FxpFormat, truncate_to_format, width_for_range
from .trainer import FloatSvmModel

#: Accepted accuracy drop, in accuracy fraction (0.5 percentage points).
MAX_ACCURACY_DROP = 0.005


@dataclass
class QuantVector:
    class_a: int
    class_b: int
    weights: list[int]
    bias: int  # stored at param_bits; engine consumes bias << bias_shift


@dataclass
class QuantizedModel:
    """Integer OvO model plus every width the hardware needs.

    Vectors are ordered lexicographically by (class_a, class_b), matching
    memory row order. The bias code is left-shifted by ``bias_shift`` (the
    input's fractional bits) before accumulation so products and bias share
    one binary point; the shift is free wiring in bespoke logic.
    """

    n_classes: int
    n_features: int
    input_fmt: FxpFormat
    param_bits: int
    vectors: list[QuantVector]
    scales: list[float] = field(default_factory=list)
    acc_width: int = 0  # set by profile_accumulator

    def __post_init__(self):
        if not 2 <= self.param_bits <= 16:
            raise ValueError("param_bits out of range")
        top = (1 << (self.param_bits - 1)) - 1
        for i, vec in enumerate(self.vectors):
            if len(vec.weights) != self.n_features:
                raise ValueError(f"vector {i}: wrong weight count")
            for v in list(vec.weights) + [vec.bias]:
                if not -top - 1 <= v <= top:
                    raise ValueError(f"vector {i}: parameter {v} exceeds {self.param_bits} bits")

    @property
    def bias_shift(self) -> int:
        return self.input_fmt.frac_bits

    @property
    def n_vectors(self) -> int:
        return len(self.vectors)


@dataclass
class QuantReport:
    param_bits: int
    float_accuracy: float
    quantized_accuracy: float
    accuracy_drop: float
    acc_width: int
    partial_min: int
    partial_max: int
    max_precision_flag: bool


def quantize_inputs(ds_or_features, fmt: FxpFormat = U4_4) -> np.ndarray:
    """Elementwise truncation of normalized features to unsigned codes."""
    X = ds_or_features.features if isinstance(ds_or_features, Dataset) else ds_or_features
    X = np.asarray(X, dtype=np.float64)
    if X.size and X.min() < 0.0:
        raise ValueError("features must be normalized to [0, 1] before quantization")
    if fmt.signed:
        raise ValueError("input format must be unsigned")
    codes = np.floor(X * fmt.scale).astype(np.int64)
    return np.minimum(codes, fmt.raw_max)


def scale_vector(weights, bias: float, param_bits: int) -> tuple[list[int], int, float]:
    """Min-max linear scaling of one support vector to signed param_bits codes.

    The scale maps the largest-magnitude coefficient (weights and bias share
    the range) onto 2**(param_bits-1) - 1; rounding is half-to-even. An
    all-zero vector keeps scale 1 and is flagged with a warning.
    """
    if param_bits < 2:
        raise ValueError("param_bits must be >= 2")
    w = np.asarray(weights, dtype=np.float64)
    top = float((1 << (param_bits - 1)) - 1)
    peak = max(float(np.max(np.abs(w))) if w.size else 0.0, abs(float(bias)))
    if peak == 0.0:
        warnings.warn("all-zero support vector; quantizing to zeros with scale 1")
        return [0] * len(w), 0, 1.0
    scale = top / peak
    iw = np.clip(np.rint(w * scale), -top, top).astype(np.int64)
    ib = int(np.clip(np.rint(bias * scale), -top, top))
    return iw.tolist(), ib, scale


def quantize_model(fmodel: FloatSvmModel, param_bits: int, input_fmt: FxpFormat = U4_4) -> QuantizedModel:
    """Quantize every OvO vector independently (per-vector scale preserves signs)."""
    if fmodel.kind != "ovo":
        raise ValueError("only OvO models map onto the sequential architecture")
    vectors = []
    scales = []
    for vec in fmodel.vectors:
        iw, ib, s = scale_vector(vec.weights, vec.bias, param_bits)
        vectors.append(QuantVector(vec.class_a, vec.class_b, iw, ib))
        scales.append(s)
    return QuantizedModel(
        fmodel.n_classes, fmodel.n_features, input_fmt, param_bits, vectors, scales
    )


def partial_sum_extremes(qm: QuantizedModel, train_codes: np.ndarray) -> tuple[int, int]:
    """Extremes over every accumulator prefix: the shifted bias, then the value
    after each MAC, for every vector on every sample."""
    X = np.asarray(train_codes, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != qm.n_features:
        raise ValueError("train codes shape mismatch")
    lo, hi = None, None
    for vec in qm.vectors:
        b = vec.bias << qm.bias_shift
        prefixes = b + np.cumsum(X * np.array(vec.weights, dtype=np.int64), axis=1)
        vec_lo = min(b, int(prefixes.min()) if prefixes.size else b)
        vec_hi = max(b, int(prefixes.max()) if prefixes.size else b)
        lo = vec_lo if lo is None else min(lo, vec_lo)
        hi = vec_hi if hi is None else max(hi, vec_hi)
    return lo, hi


def profile_accumulator(qm: QuantizedModel, train_codes: np.ndarray) -> int:
    """Size the accumulator to the exact prefix-sum range seen on training data.

    No guard bits: undersizing at test time is observable (the simulator wraps
    and flags), not silent.
    """
    lo, hi = partial_sum_extremes(qm, train_codes)
    qm.acc_width = width_for_range(lo, hi)
    return qm.acc_width


def search_param_bits(
    fmodel: FloatSvmModel,
    train: Dataset,
    test: Dataset,
    input_fmt: FxpFormat = U4_4,
    max_bits: int = 8,
    dag: Ddag | None = None,
) -> tuple[QuantizedModel, QuantReport]:
    """Try param_bits = 2..max_bits ascending; keep the first precision whose
    DDAG test accuracy sits within MAX_ACCURACY_DROP of the float DDAG test
    accuracy. Falls back to max_bits with the flag set."""
    if dag is None:
        dag = build_ddag(fmodel.n_classes)
    float_acc = float(np.mean(ddag_predict_float(fmodel, dag, test.features) == test.labels))
    test_codes = quantize_inputs(test, input_fmt)
    train_codes = quantize_inputs(train, input_fmt)

    chosen = None
    chosen_acc = 0.0
    flagged = False
    for bits in range(2, max_bits + 1):
        qm = quantize_model(fmodel, bits, input_fmt)
        q_acc = float(np.mean(ddag_predict_quant(qm, dag, test_codes) == test.labels))
        if float_acc - q_acc <= MAX_ACCURACY_DROP + 1e-12:
            chosen, chosen_acc = qm, q_acc
            break
    else:
        chosen = quantize_model(fmodel, max_bits, input_fmt)
        chosen_acc = float(np.mean(ddag_predict_quant(chosen, dag, test_codes) == test.labels))
        flagged = True

    profile_accumulator(chosen, train_codes)
    lo, hi = partial_sum_extremes(chosen, train_codes)
    report = QuantReport(
        param_bits=chosen.param_bits,
        float_accuracy=float_acc,
        quantized_accuracy=chosen_acc,
        accuracy_drop=float_acc - chosen_acc,
        acc_width=chosen.acc_width,
        partial_min=lo,
        partial_max=hi,
        max_precision_flag=flagged,
    )
    return chosen, report
