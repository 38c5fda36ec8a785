"""Greedy rectangle selection with exact weighted guarantees.

The selection pass walks the input list in order (callers wanting a
size-ordered pass sort first), keeps the first box, and keeps a later box
exactly when at most a (1 - delta) fraction of its area is already covered
by earlier kept boxes; a tie at exactly (1 - delta)|R| selects. Overlap is
measured on an incremental occupancy grid, so every count is exact.

Three verification passes check the guarantees the selection is supposed to
deliver: rejected boxes land inside the strong level set of the kept union
at threshold 1 - delta; the kept family is sparse against the rectangular
constant of the ambient weight; and the whole union retains mass against
the certified Solyanik-type bound whenever delta sits inside that bound's
validity range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from strongmax.lattice import CellSet, Grid, GridBox, WeightField, weighted_measure
from strongmax.maximal import strong_level_set
from strongmax.tauberian import strong_bound
from strongmax.weights import ap_rec

REL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SelectionResult:
    grid: Grid
    delta: float
    selected: tuple[GridBox, ...]
    rejected: tuple[GridBox, ...]
    increments: tuple[CellSet, ...]

    def selected_union(self) -> CellSet:
        mask = np.zeros(self.grid.sizes, dtype=bool)
        for inc in self.increments:
            mask |= inc.mask
        return CellSet(self.grid, mask)

    def full_union(self) -> CellSet:
        mask = np.zeros(self.grid.sizes, dtype=bool)
        for b in self.selected + self.rejected:
            mask[b.slices] = True
        return CellSet(self.grid, mask)


def cf_select(rects: Sequence[GridBox], w: WeightField, delta: float) -> SelectionResult:
    """Greedy pass in input order; keep a box iff its already-covered area
    is at most (1 - delta) of its volume."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    rects = list(rects)
    if not rects:
        raise ValueError("rectangle list is empty")
    g = w.grid
    for b in rects:
        b.validate_on(g)
    occupied = np.zeros(g.sizes, dtype=bool)
    selected: list[GridBox] = []
    rejected: list[GridBox] = []
    increments: list[CellSet] = []
    for b in rects:
        overlap = int(occupied[b.slices].sum())
        if overlap <= (1.0 - delta) * b.volume:
            new_mask = np.zeros(g.sizes, dtype=bool)
            new_mask[b.slices] = ~occupied[b.slices]
            selected.append(b)
            increments.append(CellSet(g, new_mask))
            occupied[b.slices] = True
        else:
            rejected.append(b)
    return SelectionResult(g, float(delta), tuple(selected), tuple(rejected), tuple(increments))


def verify_inclusion(result: SelectionResult) -> bool:
    """True iff every cell of every rejected box lies in the strong level
    set of the selected union at threshold 1 - delta. A theorem of the
    selection rule, so this must always return True."""
    if not result.rejected:
        return True
    level = strong_level_set(result.selected_union(), 1.0 - result.delta)
    for b in result.rejected:
        if not level.mask[b.slices].all():
            return False
    return True


@dataclass(frozen=True)
class SparsityReport:
    p: float
    ap_rec_constant: float
    sum_selected: float
    union_weight: float
    bound: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "ap_rec": self.ap_rec_constant,
            "sum_selected": self.sum_selected,
            "union_weight": self.union_weight,
            "bound": self.bound,
            "holds": self.holds,
        }


def verify_sparsity(
    result: SelectionResult,
    w: WeightField,
    p: float,
    ap_rec_constant: float | None = None,
    tol: float = REL_TOL,
) -> SparsityReport:
    """Check sum of w over kept boxes <= (ap_rec / delta^p) * w(kept union)."""
    K = ap_rec(w, p) if ap_rec_constant is None else float(ap_rec_constant)
    total = 0.0
    for b in result.selected:
        total += float(w.values[b.slices].sum())
    union_w = float(weighted_measure(w, result.selected_union()))
    bound = K / result.delta**p * union_w
    return SparsityReport(float(p), K, total, union_w, bound, bool(total <= bound * (1.0 + tol)))


@dataclass(frozen=True)
class MassRetentionReport:
    in_range: bool
    bound: float | None
    union_all: float
    union_selected: float
    holds: bool | None

    def to_dict(self) -> dict:
        return {
            "in_range": self.in_range,
            "bound": self.bound,
            "union_all": self.union_all,
            "union_selected": self.union_selected,
            "holds": self.holds,
        }


def verify_mass_retention(
    result: SelectionResult,
    w: WeightField,
    s_star: float,
    tol: float = REL_TOL,
) -> MassRetentionReport:
    """Check w(union of all boxes) <= strong_bound(1 - delta, dim, s*) times
    w(kept union). Out-of-range delta is reported, not failed."""
    n = result.grid.dim
    w_all = float(weighted_measure(w, result.full_union()))
    w_sel = float(weighted_measure(w, result.selected_union()))
    alpha = 1.0 - result.delta
    try:
        bound = strong_bound(alpha, n, s_star)
    except ValueError:
        return MassRetentionReport(False, None, w_all, w_sel, None)
    return MassRetentionReport(
        True, bound, w_all, w_sel, bool(w_all <= bound * w_sel * (1.0 + tol))
    )


def random_boxes(g: Grid, count: int, seed: int, max_side: int | None = None) -> list[GridBox]:
    """Seeded random box family for covering experiments."""
    if count < 1:
        raise ValueError(f"need at least one box, got {count}")
    rng = np.random.default_rng(seed)
    out: list[GridBox] = []
    for _ in range(count):
        lo = []
        hi = []
        for n in g.sizes:
            side_cap = n if max_side is None else min(n, max_side)
            side = int(rng.integers(1, side_cap + 1))
            start = int(rng.integers(0, n - side + 1))
            lo.append(start)
            hi.append(start + side)
        out.append(GridBox(tuple(lo), tuple(hi)))
    return out
