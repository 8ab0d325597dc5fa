"""Monge predicates, distribution arrays, and cost-equivalence transforms.

A square matrix M is Monge when m_{ij} + m_{kl} <= m_{il} + m_{kj} for all
i < k, j < l; checking every adjacent 2x2 submatrix suffices.  A 3-d array is
Monge when every 2-d subarray obtained by fixing one index is a Monge matrix,
and layered Monge when only the k-planes are required to be Monge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CostArray, DimensionError


def is_monge_matrix(M) -> bool:
    """Adjacent 2x2 criterion: M[i,j] + M[i+1,j+1] <= M[i,j+1] + M[i+1,j]."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] < 2:
        return True
    return bool(
        np.all(M[:-1, :-1] + M[1:, 1:] <= M[:-1, 1:] + M[1:, :-1])
    )


def is_monge_matrix_by_definition(M) -> bool:
    """Quadruple-level check, used as the independent oracle in tests."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for l in range(j + 1, n):
                    if M[i, j] + M[k, l] > M[i, l] + M[k, j]:
                        return False
    return True


def is_layered_monge(C: CostArray) -> bool:
    """True iff every k-plane of C is a Monge matrix."""
    return all(is_monge_matrix(C.layer(k)) for k in range(1, C.p + 1))


def is_monge_array(C: CostArray) -> bool:
    """True iff every 2-d subarray with one index fixed is a Monge matrix.

    Implies is_layered_monge.  The two extra plane families may be
    rectangular (n x p); the adjacent 2x2 criterion applies unchanged.
    """
    a = C.entries
    for axis in range(3):
        moved = np.moveaxis(a, axis, 0)
        diff = moved[:, :-1, :-1] + moved[:, 1:, 1:] - moved[:, :-1, 1:] - moved[:, 1:, :-1]
        if diff.size and diff.max() > 0:
            return False
    return True


def build_distribution_array(density) -> CostArray:
    """Negated triple prefix sums of a nonnegative density; always Monge."""
    d = np.asarray(density, dtype=np.int64)
    if d.ndim != 3:
        raise DimensionError(f"density must be 3-dimensional, got shape {d.shape}")
    if d.min() < 0:
        raise ValueError("density entries must be nonnegative")
    total = int(d.sum(dtype=object))
    if total >= 2**63:
        raise OverflowError(
            f"cumulative density sum {total} exceeds signed 64-bit range"
        )
    c = -d.cumsum(axis=0).cumsum(axis=1).cumsum(axis=2)
    return CostArray(c)


@dataclass(frozen=True)
class DecompositionTerms:
    """Additive terms a_{ij} + b_{ik} + d_{jk} of a sum-decomposable shift."""

    A: np.ndarray  # n x n
    B: np.ndarray  # n x p
    D: np.ndarray  # n x p

    def __post_init__(self):
        for name in ("A", "B", "D"):
            m = np.asarray(getattr(self, name), dtype=np.int64)
            object.__setattr__(self, name, m)

    @classmethod
    def zeros(cls, n: int, p: int) -> "DecompositionTerms":
        return cls(np.zeros((n, n), int), np.zeros((n, p), int), np.zeros((n, p), int))


def apply_decomposable_shift(C: CostArray, terms: DecompositionTerms):
    """Add a_{ij} + b_{ik} + d_{jk} to every cost; returns (C', constant).

    Every feasible solution's cost moves by the same constant: alpha for the
    full P3AP (p = n), beta for p < n, where the A term is disallowed.
    """
    n, p = C.n, C.p
    A, B, D = terms.A, terms.B, terms.D
    if A.shape != (n, n) or B.shape != (n, p) or D.shape != (n, p):
        raise DimensionError(
            f"terms must be A:{(n, n)}, B:{(n, p)}, D:{(n, p)}; "
            f"got {A.shape}, {B.shape}, {D.shape}"
        )
    if p < n and np.any(A):
        raise ValueError("A-term valid only for p = n")
    shifted = C.entries + A[:, :, None] + B[:, None, :] + D[None, :, :]
    if p == n:
        constant = int(A.sum()) + int(B.sum()) + int(D.sum())
    else:
        constant = int(B.sum()) + int(D.sum())
    return CostArray(shifted), constant


def make_triply_graded(C: CostArray, m: int = None) -> CostArray:
    """Add (i + j + k) * m to every cost so all lines become nondecreasing.

    m defaults to the entry spread max - min; any m at least the spread keeps
    the solution ranking unchanged (the added term is sum-decomposable).
    """
    spread = int(C.entries.max()) - int(C.entries.min()) if C.entries.size else 0
    if m is None:
        m = spread
    elif m < spread:
        raise ValueError(f"m={m} below entry spread {spread}")
    n, p = C.n, C.p
    i = np.arange(1, n + 1)
    k = np.arange(1, p + 1)
    grade = (i[:, None, None] + i[None, :, None] + k[None, None, :]) * m
    return CostArray(C.entries + grade)


def is_triply_graded(C: CostArray, strict: bool = False) -> bool:
    """Monotone (nondecreasing, or increasing when strict) along all lines."""
    a = C.entries
    for axis in range(3):
        if a.shape[axis] < 2:
            continue
        d = np.diff(a, axis=axis)
        if strict:
            if d.min() <= 0:
                return False
        elif d.min() < 0:
            return False
    return True
