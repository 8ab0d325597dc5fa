"""Instances and solutions of the p-layer planar 3-dimensional assignment problem.

An instance is an n x n x p integer cost tensor.  A feasible solution picks
p pairwise disjoint permutations of 1..n, one per layer, and can be written
either as a p x n Latin rectangle or as a partial n x n Latin square whose
filled cells carry layer labels 1..p.  All public indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np


class DimensionError(ValueError):
    """Shapes of instance and solution do not match."""


class InfeasibleSolutionError(ValueError):
    """A grid violates the Latin row/column constraints."""


@dataclass(frozen=True)
class CostArray:
    """n x n x p integer cost tensor; entries[i-1, j-1, k-1] is c_{ijk}."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 3 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected (n, n, p) tensor, got shape {a.shape}")
        n, _, p = a.shape
        if not 1 <= p <= n:
            raise DimensionError(f"need 1 <= p <= n, got n={n}, p={p}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def p(self) -> int:
        return self.entries.shape[2]

    def at(self, i: int, j: int, k: int) -> int:
        """Cost c_{ijk} with 1-based indices."""
        return int(self.entries[i - 1, j - 1, k - 1])

    def layer(self, k: int) -> np.ndarray:
        """The k-plane as a read-only n x n matrix."""
        return self.entries[:, :, k - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, CostArray) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True)
class LatinRectangle:
    """p x n grid; rows[k-1][j-1] = i means layer k assigns row i to column j.

    Every row is a permutation of 1..n and every column holds distinct values
    (the Figure-style convention: the entry at (k, j) is the first index i).
    """

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        ok, why = latin_rows_violation(rows)
        if not ok:
            raise InfeasibleSolutionError(why)

    @property
    def p(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def entry(self, k: int, j: int) -> int:
        return self.rows[k - 1][j - 1]

    def triples(self) -> Iterator[tuple]:
        """All (i, j, k) with x_{ijk} = 1."""
        for k, row in enumerate(self.rows, start=1):
            for j, i in enumerate(row, start=1):
                yield (i, j, k)


@dataclass(frozen=True)
class PartialLatinSquare:
    """n x n grid of layer labels; cells[i-1][j-1] = k (or 0 for empty)."""

    n: int
    p: int
    cells: tuple

    def __post_init__(self):
        cells = tuple(tuple(int(v) for v in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) != self.n or any(len(r) != self.n for r in cells):
            raise DimensionError(f"cells must be {self.n}x{self.n}")
        ok, why = partial_square_violation(cells, self.p)
        if not ok:
            raise InfeasibleSolutionError(why)

    def cell(self, i: int, j: int) -> Optional[int]:
        v = self.cells[i - 1][j - 1]
        return v if v else None

    def filled(self) -> Iterator[tuple]:
        """All (i, j, k) over filled cells."""
        for i, row in enumerate(self.cells, start=1):
            for j, k in enumerate(row, start=1):
                if k:
                    yield (i, j, k)


Solution = Union[LatinRectangle, PartialLatinSquare]


def latin_rows_violation(rows) -> tuple:
    """(ok, message) for the Latin rectangle invariants on raw row tuples."""
    if not rows:
        return False, "no rows"
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        return False, "rows of unequal length"
    if len(rows) > n:
        return False, f"more rows ({len(rows)}) than columns ({n})"
    for k, row in enumerate(rows, start=1):
        if sorted(row) != list(range(1, n + 1)):
            return False, f"row {k} is not a permutation of 1..{n}"
    for j in range(n):
        seen = {}
        for k, row in enumerate(rows, start=1):
            v = row[j]
            if v in seen:
                return False, (
                    f"column {j + 1} repeats value {v} in rows {seen[v]} and {k}"
                )
            seen[v] = k
    return True, ""


def partial_square_violation(cells, p: int) -> tuple:
    """(ok, message) for the partial Latin square invariants on raw cells."""
    n = len(cells)
    for i, row in enumerate(cells, start=1):
        seen = {}
        for j, v in enumerate(row, start=1):
            if not v:
                continue
            if not 1 <= v <= p:
                return False, f"cell ({i},{j}) holds {v}, outside 1..{p}"
            if v in seen:
                return False, f"row {i} repeats layer {v} in columns {seen[v]} and {j}"
            seen[v] = j
    for j in range(1, n + 1):
        seen = {}
        for i in range(1, n + 1):
            v = cells[i - 1][j - 1]
            if not v:
                continue
            if v in seen:
                return False, f"column {j} repeats layer {v} in rows {seen[v]} and {i}"
            seen[v] = i
    return True, ""


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.feasible


def is_feasible(sol) -> FeasibilityReport:
    """Check Latin constraints on a solution or on raw rows/cells.

    Accepts LatinRectangle, PartialLatinSquare, or a `(rows)` tuple of row
    tuples (treated as a rectangle).  Returns a report instead of raising.
    """
    if isinstance(sol, LatinRectangle):
        return FeasibilityReport(True)
    if isinstance(sol, PartialLatinSquare):
        return FeasibilityReport(True)
    rows = tuple(tuple(r) for r in sol)
    ok, why = latin_rows_violation(rows)
    return FeasibilityReport(ok, why)


def check_rows(rows) -> FeasibilityReport:
    """Feasibility of raw rectangle rows without constructing a LatinRectangle."""
    ok, why = latin_rows_violation(tuple(tuple(r) for r in rows))
    return FeasibilityReport(ok, why)


def cost(C: CostArray, sol: Solution) -> int:
    """Objective value: sum of c_{ijk} over the placed triples."""
    if isinstance(sol, PartialLatinSquare):
        if sol.n != C.n:
            raise DimensionError(f"solution side {sol.n} != instance side {C.n}")
        if sol.p > C.p:
            raise DimensionError(f"solution uses layer > p={C.p}")
        total = 0
        count = 0
        for i, j, k in sol.filled():
            total += C.at(i, j, k)
            count += 1
        if count != C.n * sol.p:
            raise InfeasibleSolutionError(
                f"incomplete solution: {count} filled cells, expected {C.n * sol.p}"
            )
        return total
    if sol.n != C.n or sol.p != C.p:
        raise DimensionError(
            f"solution is {sol.p}x{sol.n}, instance needs {C.p}x{C.n}"
        )
    total = 0
    for k, row in enumerate(sol.rows, start=1):
        for j, i in enumerate(row, start=1):
            total += C.at(i, j, k)
    return total


def to_partial_latin_square(sol: LatinRectangle) -> PartialLatinSquare:
    """Rectangle -> partial square: value i at (k, j) becomes label k at (i, j)."""
    n, p = sol.n, sol.p
    cells = [[0] * n for _ in range(n)]
    for i, j, k in sol.triples():
        cells[i - 1][j - 1] = k
    return PartialLatinSquare(n=n, p=p, cells=tuple(tuple(r) for r in cells))


def to_latin_rectangle(L: PartialLatinSquare) -> LatinRectangle:
    """Partial square -> rectangle; requires each layer to appear exactly n times."""
    n, p = L.n, L.p
    rows = [[0] * n for _ in range(p)]
    for i, j, k in L.filled():
        rows[k - 1][j - 1] = i
    for k in range(p):
        if 0 in rows[k]:
            j = rows[k].index(0) + 1
            raise InfeasibleSolutionError(
                f"incomplete solution: layer {k + 1} missing in column {j}"
            )
    return LatinRectangle(rows=tuple(tuple(r) for r in rows))


def cyclic_latin_square(n: int) -> LatinRectangle:
    """Order-n Latin square with row k the cyclic shift by k-1."""
    rows = tuple(
        tuple((j + k) % n + 1 for j in range(n)) for k in range(n)
    )
    return LatinRectangle(rows=rows)
