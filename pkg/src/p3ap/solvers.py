"""Exact solvers: backtracking over Latin rectangles and the banded DP.

The brute-force solver enumerates every feasible p x n Latin rectangle and is
the universal oracle for small instances.  The dynamic program exploits the
bandwidth bound for layered Monge costs: some optimal partial Latin square
fills cells only where |i - j| <= 2p - 2, so rows can be processed top to
bottom over a sliding window of 4p - 4 column signatures.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .core import CostArray, LatinRectangle, PartialLatinSquare
from .monge import is_layered_monge


class OracleSizeLimitError(ValueError):
    """Instance too large for exhaustive search; pass force=True to override."""


class NotLayeredMongeError(ValueError):
    """The banded DP requires a layered Monge instance unless overridden."""


@dataclass
class SolveReport:
    optimum: int
    solution: LatinRectangle
    solver: str
    states_explored: int = 0
    wall_ms: float = 0.0
    all_optima: Optional[List[LatinRectangle]] = None
    optima_count: Optional[int] = None
    unique_in_band: Optional[bool] = None
    state_counts: Optional[List[int]] = None

    def to_dict(self) -> dict:
        return {
            "optimum": self.optimum,
            "solution_rows": [list(r) for r in self.solution.rows],
            "solver": self.solver,
            "states_explored": self.states_explored,
            "unique_in_band": self.unique_in_band,
            "wall_ms": self.wall_ms,
        }


def _bruteforce_limits_ok(n: int, p: int) -> bool:
    # Full enumeration stays tractable for 3 layers up to n=8, or any p up to n=5.
    return (n <= 8 and p <= 3) or n <= 5


def solve_bruteforce(
    C: CostArray,
    all_optima: bool = False,
    prune: bool = False,
    force: bool = False,
) -> SolveReport:
    """Exact optimum by row-by-row backtracking over all Latin rectangles.

    With prune=True an admissible lower bound (suffix sums of per-column
    layer minima) cuts branches; the optimum is unaffected.  With all_optima
    every optimal rectangle is collected.
    """
    n, p = C.n, C.p
    if not force and not _bruteforce_limits_ok(n, p):
        raise OracleSizeLimitError(
            f"oracle size limit: n={n}, p={p} exceeds the exhaustive-search "
            "default (n <= 8 with p <= 3, or n <= 5); pass force=True to override"
        )
    t0 = time.perf_counter()
    layers = [[[int(C.entries[i, j, k]) for j in range(n)] for i in range(n)] for k in range(p)]

    # colmin[k][j]: cheapest row choice for layer k, column j (0-based).
    colmin = [[min(layers[k][i][j] for i in range(n)) for j in range(n)] for k in range(p)]
    # row_suffix[k][j]: bound for columns j.. of layer k; layer_suffix[k]: layers k.. .
    row_suffix = []
    for k in range(p):
        suf = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            suf[j] = suf[j + 1] + colmin[k][j]
        row_suffix.append(suf)
    layer_suffix = [0] * (p + 1)
    for k in range(p - 1, -1, -1):
        layer_suffix[k] = layer_suffix[k + 1] + row_suffix[k][0]

    best = [None]
    best_rows: List[tuple] = []
    col_used = [[False] * (n + 1) for _ in range(n)]  # col_used[j][i]
    row_vals = [[0] * n for _ in range(p)]
    nodes = [0]

    def place(k: int, j: int, partial: int, row_used: int):
        nodes[0] += 1
        if j == n:
            if k + 1 == p:
                total = partial
                if best[0] is None or total < best[0]:
                    best[0] = total
                    del best_rows[:]
                    best_rows.append(tuple(tuple(r) for r in row_vals))
                elif all_optima and total == best[0]:
                    best_rows.append(tuple(tuple(r) for r in row_vals))
                return
            place(k + 1, 0, partial, 0)
            return
        if prune and best[0] is not None:
            bound = partial + row_suffix[k][j] + layer_suffix[k + 1]
            if bound > best[0] or (not all_optima and bound == best[0]):
                return
        row = layers[k]
        used_j = col_used[j]
        for i in range(1, n + 1):
            if used_j[i] or (row_used >> i) & 1:
                continue
            used_j[i] = True
            row_vals[k][j] = i
            place(k, j + 1, partial + row[i - 1][j], row_used | (1 << i))
            used_j[i] = False
        row_vals[k][j] = 0

    place(0, 0, 0, 0)
    rect = LatinRectangle(rows=best_rows[0])
    report = SolveReport(
        optimum=best[0],
        solution=rect,
        solver="brute",
        states_explored=nodes[0],
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    if all_optima:
        report.all_optima = [LatinRectangle(rows=r) for r in best_rows]
        report.optima_count = len(best_rows)
    return report


def solve_dp(
    C: CostArray,
    all_optima_in_band: bool = False,
    force: bool = False,
    method: str = "auto",
) -> SolveReport:
    """Banded dynamic program; exact for layered Monge cost arrays.

    Rows i = 1..n of the partial Latin square are filled in order; layers
    1..p go into columns i-2p+2 .. i+2p-2.  States are deduplicated by the
    (4p-4)-tuple of column content subsets over columns i-2p+3 .. i+2p-2
    (out-of-range slots count as virtually complete), keeping minimal cost.

    Two interchangeable engines: "packed" encodes the whole signature in one
    machine integer and runs each step as a few vector operations (used when
    p*(4p-4) fits in 63 bits), "reference" is the plain dict-based version.
    Both retain states in increasing packed-signature order and break cost
    ties toward the earlier (predecessor order, then placement order)
    candidate, so they produce identical reports.
    """
    n, p = C.n, C.p
    if not force and not is_layered_monge(C):
        raise NotLayeredMongeError(
            "instance is not layered Monge; solve_dp is only exact on layered "
            "Monge arrays (pass force=True to run anyway)"
        )
    if method == "auto":
        method = "packed" if p * (4 * p - 4) <= 62 else "reference"
    if method == "packed":
        return _solve_dp_packed(C, all_optima_in_band)
    if method == "reference":
        return _solve_dp_reference(C, all_optima_in_band)
    raise ValueError(f"unknown DP method {method!r}")


def _row_placements(i: int, n: int, p: int):
    """Injective layer->column maps for row i, in deterministic order.

    Columns run over max(1, i-2p+2) .. min(n, i+2p-2); enumeration is
    lexicographic in (column of layer 1, ..., column of layer p).
    """
    lo = max(1, i - 2 * p + 2)
    hi = min(n, i + 2 * p - 2)
    return list(itertools.permutations(range(lo, hi + 1), p))


def _pack_sig(sig, p: int) -> int:
    """Signature tuple -> integer; slot t occupies bits p*t .. p*t+p-1."""
    packed = 0
    for t, mask in enumerate(sig):
        packed |= mask << (p * t)
    return packed


def _cost_rows(C: CostArray):
    n, p = C.n, C.p
    return [
        [[int(C.entries[i, j, k]) for j in range(n)] for k in range(p)]
        for i in range(n)
    ]


def _init_sig(n: int, p: int):
    # The step-0 window covers columns 3-2p .. 2p-2: empty or out of range.
    full = (1 << p) - 1
    return tuple(full if not 1 <= c <= n else 0 for c in range(3 - 2 * p, 2 * p - 1))


def _solve_dp_packed(C: CostArray, all_optima: bool) -> SolveReport:
    t0 = time.perf_counter()
    n, p = C.n, C.p
    full = (1 << p) - 1
    width = 4 * p - 4
    entries = C.entries

    sigs = np.array([_pack_sig(_init_sig(n, p), p)], dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    # Per step: placements, first-predecessor arrays, and (optionally) all
    # cost-tied predecessors as (state_group, prev_index, placement) triples.
    step_pls = [None]
    step_pred = [None]
    step_opt = [None]
    state_counts = [1]
    states_explored = 1

    for i in range(1, n + 1):
        pls = _row_placements(i, n, p)
        T = len(pls)
        base = i - 2 * p + 2  # leftmost column of the extended window
        right_col = i + 2 * p - 2
        leave_in_range = 1 <= base <= n
        # Extend the window by the newly reachable right column.
        right_mask = 0 if right_col <= n else full
        ext = sigs + (right_mask << (p * width))
        lo = max(1, i - 2 * p + 2)
        ci = entries[i - 1, lo - 1 : min(n, right_col)].T.tolist()

        adds = np.empty(T, dtype=np.int64)
        deltas = np.empty(T, dtype=np.int64)
        for t, pl in enumerate(pls):
            add = 0
            delta = 0
            for k, col in enumerate(pl):
                add |= 1 << (p * (col - base) + k)
                delta += ci[k][col - lo]
            adds[t] = add
            deltas[t] = delta

        cand_sig, cand_cost, cand_prev, cand_t = [], [], [], []
        for t in range(T):
            add = adds[t]
            sel = np.nonzero((ext & add) == 0)[0]
            if not sel.size:
                continue
            new_ext = ext[sel] + add
            if leave_in_range:
                keep = (new_ext & full) == full
                sel = sel[keep]
                if not sel.size:
                    continue
                new_ext = new_ext[keep]
            cand_sig.append(new_ext >> p)
            cand_cost.append(costs[sel] + deltas[t])
            cand_prev.append(sel)
            cand_t.append(np.full(sel.size, t, dtype=np.int64))
        if not cand_sig:
            raise RuntimeError(
                f"internal error: no feasible band-limited extension at row {i}"
            )
        cand_sig = np.concatenate(cand_sig)
        cand_cost = np.concatenate(cand_cost)
        cand_prev = np.concatenate(cand_prev)
        cand_t = np.concatenate(cand_t)
        rank = cand_prev * T + cand_t

        order = np.lexsort((rank, cand_cost, cand_sig))
        cand_sig = cand_sig[order]
        cand_cost = cand_cost[order]
        cand_prev = cand_prev[order]
        cand_t = cand_t[order]
        first = np.ones(cand_sig.size, dtype=bool)
        first[1:] = cand_sig[1:] != cand_sig[:-1]
        starts = np.nonzero(first)[0]

        sigs = cand_sig[starts]
        costs = cand_cost[starts]
        step_pls.append(pls)
        step_pred.append((cand_prev[starts], cand_t[starts]))
        if all_optima:
            group = np.cumsum(first) - 1
            tied = cand_cost == costs[group]
            step_opt.append((group[tied], cand_prev[tied], cand_t[tied]))
        else:
            step_opt.append(None)
        state_counts.append(sigs.size)
        states_explored += sigs.size

    target = (1 << (p * width)) - 1 if width else 0
    final = np.nonzero(sigs == target)[0]
    if final.size != 1:
        raise RuntimeError(
            f"internal error: expected exactly one final state, got {final.size}"
        )
    optimum = int(costs[final[0]])

    placements = []
    state = int(final[0])
    for i in range(n, 0, -1):
        prev_arr, t_arr = step_pred[i]
        placements.append(step_pls[i][int(t_arr[state])])
        state = int(prev_arr[state])
    placements.reverse()
    solution = _rect_from_placements(placements, n, p)

    report = SolveReport(
        optimum=optimum,
        solution=solution,
        solver="dp",
        states_explored=states_explored,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        state_counts=state_counts,
    )
    if all_optima:
        seqs = _trace_all_packed(step_pls, step_opt, int(final[0]), n)
        report.all_optima = [_rect_from_placements(s, n, p) for s in seqs]
        report.optima_count = len(seqs)
        report.unique_in_band = len(seqs) == 1
    return report


def _trace_all_packed(step_pls, step_opt, final_state: int, n: int):
    """Every optimal placement sequence via the tied-predecessor arrays."""
    preds_by_step = []
    for i in range(n + 1):
        opt = step_opt[i]
        if opt is None:
            preds_by_step.append(None)
            continue
        group, prev, t = opt
        by_state: dict = {}
        for g, pr, tt in zip(group.tolist(), prev.tolist(), t.tolist()):
            by_state.setdefault(g, []).append((pr, tt))
        preds_by_step.append(by_state)

    results = []

    def rec(i, state, acc):
        if i == 0:
            results.append(list(reversed(acc)))
            return
        for prev, t in preds_by_step[i][state]:
            acc.append(step_pls[i][t])
            rec(i - 1, prev, acc)
            acc.pop()

    rec(n, final_state, [])
    return results


def _solve_dp_reference(C: CostArray, all_optima: bool) -> SolveReport:
    t0 = time.perf_counter()
    n, p = C.n, C.p
    full = (1 << p) - 1
    width = 4 * p - 4
    cost_rows = _cost_rows(C)

    # steps[i]: signature -> [cost, preds]; preds = [(prev_sig, placement), ...]
    prev_states = {_init_sig(n, p): [0, []]}
    steps = [prev_states]
    states_explored = 1
    state_counts = [1]

    for i in range(1, n + 1):
        base = i - 2 * p + 2
        win_lo = i - 2 * p + 3
        leave = base
        cur_states: dict = {}
        ci = cost_rows[i - 1]
        pls = _row_placements(i, n, p)
        for sig, (base_cost, _) in prev_states.items():
            # Masks over the extended window, indexed by column; the previous
            # window covered columns base .. base+width-1.
            col_masks = {c: sig[t] for t, c in enumerate(range(base, base + width))}
            col_masks[base + width] = 0 if base + width <= n else full
            for placement in pls:
                if any(col_masks[j] >> k & 1 for k, j in enumerate(placement)):
                    continue
                delta = 0
                new_masks = dict(col_masks)
                for k, j in enumerate(placement):
                    new_masks[j] |= 1 << k
                    delta += ci[k][j - 1]
                if 1 <= leave <= n and new_masks[leave] != full:
                    continue  # column leaves the window incomplete: dead end
                new_sig = tuple(
                    full if not 1 <= c <= n else new_masks.get(c, 0)
                    for c in range(win_lo, win_lo + width)
                )
                total = base_cost + delta
                entry = cur_states.get(new_sig)
                if entry is None:
                    cur_states[new_sig] = [total, [(sig, placement)]]
                elif total < entry[0]:
                    entry[0] = total
                    entry[1] = [(sig, placement)]
                elif total == entry[0] and all_optima:
                    entry[1].append((sig, placement))
        if not cur_states:
            raise RuntimeError(
                f"internal error: no feasible band-limited extension at row {i}"
            )
        # Retain in increasing packed-signature order to match the packed engine.
        cur_states = dict(
            sorted(cur_states.items(), key=lambda kv: _pack_sig(kv[0], p))
        )
        steps.append(cur_states)
        states_explored += len(cur_states)
        state_counts.append(len(cur_states))
        prev_states = cur_states

    # After step n every remaining in-range window column must be complete.
    final = {
        sig: v
        for sig, v in prev_states.items()
        if all(
            m == full
            for c, m in zip(range(n - 2 * p + 3, n - 2 * p + 3 + width), sig)
            if 1 <= c <= n
        )
    }
    if len(final) != 1:
        raise RuntimeError(
            f"internal error: expected exactly one final state, got {len(final)}"
        )
    (final_sig, (optimum, _)), = final.items()

    placements = _trace_first(steps, final_sig, n)
    solution = _rect_from_placements(placements, n, p)
    report = SolveReport(
        optimum=optimum,
        solution=solution,
        solver="dp",
        states_explored=states_explored,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        state_counts=state_counts,
    )
    if all_optima:
        seqs = _trace_all(steps, final_sig, n)
        report.all_optima = [_rect_from_placements(s, n, p) for s in seqs]
        report.optima_count = len(seqs)
        report.unique_in_band = len(seqs) == 1
    return report


def _trace_first(steps, final_sig, n):
    """Row placements of the retained optimum, walking first predecessors."""
    placements = [None] * (n + 1)
    sig = final_sig
    for i in range(n, 0, -1):
        prev_sig, placement = steps[i][sig][1][0]
        placements[i] = placement
        sig = prev_sig
    return placements[1:]


def _trace_all(steps, final_sig, n):
    """Every optimal placement sequence reachable through stored predecessors."""
    results = []

    def rec(i, sig, acc):
        if i == 0:
            results.append(list(reversed(acc)))
            return
        for prev_sig, placement in steps[i][sig][1]:
            acc.append(placement)
            rec(i - 1, prev_sig, acc)
            acc.pop()

    rec(n, final_sig, [])
    return results


def _rect_from_placements(placements, n, p) -> LatinRectangle:
    rows = [[0] * n for _ in range(p)]
    for i, placement in enumerate(placements, start=1):
        for k in range(p):
            rows[k][placement[k] - 1] = i
    return LatinRectangle(rows=tuple(tuple(r) for r in rows))


def solve_auto(C: CostArray, **kwargs) -> SolveReport:
    """Dispatch: banded DP on layered Monge inputs, else brute force."""
    if is_layered_monge(C):
        report = solve_dp(C, **kwargs)
        report.solver = "dp (auto)"
        return report
    try:
        report = solve_bruteforce(C, all_optima=kwargs.get("all_optima_in_band", False))
    except OracleSizeLimitError:
        raise OracleSizeLimitError(
            "no applicable exact solver: instance is not layered Monge and "
            "exceeds the brute-force size limit"
        )
    report.solver = "brute (auto)"
    return report
