"""One-vs-one decision DAG: the control graph that picks a class with n-1
pairwise evaluations, plus bit-exact reference inference over it.

Each state carries an interval (lo, hi) of still-alive extreme classes and
evaluates the separator for pair (lo, hi). Engine output y=1 means the pair's
lower class (trained as +1) won, eliminating hi; y=0 eliminates lo. A state's
id doubles as the memory row index of its pair under lexicographic pair
ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# An edge is ("node", state_id) or ("leaf", class_id).
Edge = tuple[str, int]


@dataclass(frozen=True)
class DdagNode:
    state_id: int
    class_a: int
    class_b: int
    row_index: int
    on_a_wins: Edge
    on_b_wins: Edge


@dataclass
class Ddag:
    n_classes: int
    nodes: dict[int, DdagNode]
    initial_state: int
    state_bits: int
    ordering: str = "natural"  # root compares class 0 vs class n-1


def pair_count(n_classes: int) -> int:
    return n_classes * (n_classes - 1) // 2


def pair_index(a: int, b: int, n_classes: int) -> int:
    """Row index of pair (a, b), a < b, under lexicographic ordering."""
    if not 0 <= a < b < n_classes:
        raise ValueError(f"bad pair ({a},{b}) for {n_classes} classes")
    return a * (n_classes - 1) - a * (a - 1) // 2 + (b - a - 1)


def state_bits_for(n_classes: int) -> int:
    return max(1, math.ceil(math.log2(pair_count(n_classes))))


def build_ddag(n_classes: int) -> Ddag:
    """Classical DDAG over the natural class order [0..n-1]."""
    if n_classes < 2:
        raise ValueError("need at least two classes")
    n = n_classes
    nodes = {}
    for lo in range(n):
        for hi in range(lo + 1, n):
            sid = pair_index(lo, hi, n)
            if lo == hi - 1:
                a_edge: Edge = ("leaf", lo)
            else:
                a_edge = ("node", pair_index(lo, hi - 1, n))
            if lo + 1 == hi:
                b_edge: Edge = ("leaf", hi)
            else:
                b_edge = ("node", pair_index(lo + 1, hi, n))
            nodes[sid] = DdagNode(sid, lo, hi, sid, a_edge, b_edge)
    return Ddag(n, nodes, pair_index(0, n - 1, n), state_bits_for(n))


def _walk(dag: Ddag, decide) -> tuple[int, list[tuple[int, int]]]:
    evaluations = []
    sid = dag.initial_state
    while True:
        node = dag.nodes[sid]
        y = 1 if decide(node) else 0
        evaluations.append((node.row_index, y))
        kind, target = node.on_a_wins if y else node.on_b_wins
        if kind == "leaf":
            return target, evaluations
        sid = target


def ddag_infer(qm, dag: Ddag, codes) -> tuple[int, list[tuple[int, int]]]:
    """Walk the DAG with exact integer arithmetic on quantized parameters.

    Returns the leaf class and the (row, y) log; always exactly n-1 entries.
    """
    codes = [int(c) for c in codes]
    shift = qm.bias_shift

    def decide(node):
        vec = qm.vectors[node.row_index]
        acc = vec.bias << shift
        for w, x in zip(vec.weights, codes):
            acc += w * x
        return acc >= 0

    return _walk(dag, decide)


def ddag_predict_quant(qm, dag: Ddag, codes_matrix) -> np.ndarray:
    return np.array([ddag_infer(qm, dag, row)[0] for row in codes_matrix], dtype=np.int64)


def ddag_infer_float(fmodel, dag: Ddag, x) -> tuple[int, list[tuple[int, int]]]:
    """Same walk on the float model (vectors in lexicographic pair order)."""
    x = np.asarray(x, dtype=np.float64)

    def decide(node):
        vec = fmodel.vectors[node.row_index]
        return float(x @ vec.weights + vec.bias) >= 0.0

    return _walk(dag, decide)


def ddag_predict_float(fmodel, dag: Ddag, features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    return np.array([ddag_infer_float(fmodel, dag, row)[0] for row in X], dtype=np.int64)


def ovo_vote_infer(qm, codes) -> int:
    """Baseline semantics: evaluate every pair, max-wins vote, lowest id on ties."""
    codes = [int(c) for c in codes]
    shift = qm.bias_shift
    wins = [0] * qm.n_classes
    for vec in qm.vectors:
        acc = vec.bias << shift
        for w, x in zip(vec.weights, codes):
            acc += w * x
        wins[vec.class_a if acc >= 0 else vec.class_b] += 1
    return max(range(qm.n_classes), key=lambda c: (wins[c], -c))


def ovo_vote_predict_quant(qm, codes_matrix) -> np.ndarray:
    return np.array([ovo_vote_infer(qm, row) for row in codes_matrix], dtype=np.int64)
