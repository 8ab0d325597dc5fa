"""Structural operations on solutions: swaps, bandwidth, band normalization,
and block decomposition of Latin rectangles.

On layered Monge costs, exchanging two values within a row so that the
smaller one moves left never increases cost; repeated diagonal-directed
2-exchanges push every filled cell of an optimal partial Latin square into
the band |i - j| <= 2p - 2 without losing optimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .core import (
    CostArray,
    LatinRectangle,
    PartialLatinSquare,
    check_rows,
    cost,
    to_latin_rectangle,
    to_partial_latin_square,
)
from .monge import is_layered_monge


@dataclass(frozen=True)
class SwapResult:
    """Outcome of exchanging two values within one rectangle row."""

    rows: tuple
    feasible: bool
    delta_cost: Optional[int] = None

    @property
    def rectangle(self) -> LatinRectangle:
        if not self.feasible:
            raise ValueError("swap result is infeasible")
        return LatinRectangle(rows=self.rows)


def swap(
    sol: LatinRectangle, r: int, q: int, k: int, C: Optional[CostArray] = None
) -> SwapResult:
    """Exchange the positions of values r < q in row k.

    The resulting rows always stay row-permutations; the feasible flag
    records whether column-distinctness survives.  With a cost array given,
    delta_cost is the cost change of the exchange.
    """
    if not 1 <= k <= sol.p:
        raise ValueError(f"layer {k} out of range 1..{sol.p}")
    if r >= q:
        raise ValueError(f"need r < q, got r={r}, q={q}")
    row = list(sol.rows[k - 1])
    jr, jq = row.index(r) + 1, row.index(q) + 1
    row[jr - 1], row[jq - 1] = q, r
    rows = tuple(
        tuple(row) if kk == k else sol.rows[kk - 1] for kk in range(1, sol.p + 1)
    )
    feasible = bool(check_rows(rows))
    delta = None
    if C is not None:
        delta = (
            C.at(r, jq, k) + C.at(q, jr, k) - C.at(r, jr, k) - C.at(q, jq, k)
        )
    return SwapResult(rows=rows, feasible=feasible, delta_cost=delta)


def bandwidth(L) -> int:
    """Maximum |i - j| over filled cells (0 for an empty grid)."""
    if isinstance(L, LatinRectangle):
        L = to_partial_latin_square(L)
    return max((abs(i - j) for i, j, _ in L.filled()), default=0)


def band_normalize(sol, C: CostArray):
    """Move an arbitrary feasible solution into the band |i - j| <= 2p - 2.

    Requires layered Monge costs; the returned solution is feasible, never
    costs more than the input, and in particular maps optima to optima.
    Works on the partial square: pick a filled cell at maximal offset beyond
    the band (smallest i, then j), find a same-layer partner in the opposite
    quadrant whose cross cells are free (smallest q, then r), and 2-exchange;
    the Monge inequality on the layer makes every exchange non-increasing.
    """
    if not is_layered_monge(C):
        raise ValueError("band_normalize requires a layered Monge cost array")
    as_rectangle = isinstance(sol, LatinRectangle)
    square = to_partial_latin_square(sol) if as_rectangle else sol
    n, p = square.n, square.p
    band = 2 * p - 2
    cells = [list(row) for row in square.cells]

    max_exchanges = n * p * 2 * n + 1
    for _ in range(max_exchanges):
        worst = 0
        pivot = None
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if cells[i - 1][j - 1] and abs(i - j) > max(worst, band):
                    worst = abs(i - j)
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        k = cells[i - 1][j - 1]
        partner = None
        if j > i:
            # Candidate area: below and to the left of the pivot.
            qs, rs = range(i + 1, n + 1), range(1, j)
        else:
            qs, rs = range(1, i), range(j + 1, n + 1)
        for q in qs:
            for r in rs:
                if (
                    cells[q - 1][r - 1] == k
                    and not cells[i - 1][r - 1]
                    and not cells[q - 1][j - 1]
                ):
                    partner = (q, r)
                    break
            if partner:
                break
        if partner is None:
            raise RuntimeError(
                f"internal error: no exchange partner for pivot ({i},{j}) at "
                f"offset {worst} > {band}; contradicts the bandwidth theorem"
            )
        q, r = partner
        cells[i - 1][j - 1] = 0
        cells[q - 1][r - 1] = 0
        cells[i - 1][r - 1] = k
        cells[q - 1][j - 1] = k
    else:
        raise RuntimeError("internal error: band normalization did not terminate")

    result = PartialLatinSquare(n=n, p=p, cells=tuple(tuple(r) for r in cells))
    assert cost(C, result) <= cost(C, square), "exchange increased cost"
    return to_latin_rectangle(result) if as_rectangle else result


@dataclass(frozen=True)
class Block:
    """Interval of adjacent columns whose width equals its distinct-value count."""

    start: int
    end: int
    integers: frozenset
    normalized: bool

    @property
    def width(self) -> int:
        return self.end - self.start + 1

    def to_dict(self) -> dict:
        return {
            "from": self.start,
            "to": self.end,
            "integers": sorted(self.integers),
            "normalized": self.normalized,
        }


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple

    @property
    def widths(self) -> tuple:
        return tuple(b.width for b in self.blocks)

    def all_normalized_width_2_or_3(self) -> bool:
        return all(b.normalized and b.width in (2, 3) for b in self.blocks)

    def to_list(self) -> list:
        return [b.to_dict() for b in self.blocks]


def block_decompose(sol: LatinRectangle) -> BlockPartition:
    """Greedy minimal partition of the columns into blocks.

    Scanning left to right, a block closes as soon as the number of distinct
    integers seen equals the current width; minimality makes this the unique
    coarsest-free decomposition.  Width-1 blocks only occur for p = 1.
    """
    n, p = sol.n, sol.p
    blocks: List[Block] = []
    start = 1
    seen: set = set()
    for j in range(1, n + 1):
        for k in range(1, p + 1):
            seen.add(sol.entry(k, j))
        if len(seen) == j - start + 1:
            normalized = seen == set(range(start, j + 1))
            if p >= 2 and j == start:
                raise AssertionError("width-1 block impossible for p >= 2")
            blocks.append(
                Block(start=start, end=j, integers=frozenset(seen), normalized=normalized)
            )
            start = j + 1
            seen = set()
    assert not seen, "scan ended inside an open block"
    return BlockPartition(blocks=tuple(blocks))


def normalized_block_property(sol: LatinRectangle, block: Block) -> bool:
    """Boundary-mixing property of a normalized block.

    For a normalized block on columns j..j+m-1 and every cut 1 <= i < m: the
    first i columns contain some integer >= i+j, and the last i columns some
    integer <= j+m-i-1.  Follows from minimality of blocks.
    """
    if not block.normalized:
        raise ValueError("property applies to normalized blocks only")
    j, m = block.start, block.width
    for i in range(1, m):
        head = {
            sol.entry(k, c)
            for k in range(1, sol.p + 1)
            for c in range(j, j + i)
        }
        tail = {
            sol.entry(k, c)
            for k in range(1, sol.p + 1)
            for c in range(j + m - i, j + m)
        }
        if max(head) < i + j or min(tail) > j + m - i - 1:
            return False
    return True
