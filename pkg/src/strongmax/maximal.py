"""Maximal operators over grid-aligned boxes and their level sets.

All suprema range over axis-aligned cell-index boxes (grid intervals in one
dimension). For cell data this family is finite, so every supremum is an
exact maximum; nothing here is approximated. Level sets use the strict
inequality ``average > alpha``; ties at the threshold are excluded.

Level sets are the primary product: a level set costs O(number of boxes)
via prefix sums plus difference-array painting. Full value fields come from
``directional_max`` (an exact O(n^2) scan per line) and from the
brute-force reference fields, which exist to cross-check the fast paths and
scale with the total cell-in-box incidence count instead.

Both float64 and exact ``Fraction`` (object dtype) inputs are supported
everywhere; predicates are then evaluated in the input's arithmetic. The
perturbed predicates are evaluated in the product form
``(1 - gamma) * num > (alpha - gamma) * den`` so that search and sweep
results recompute bitwise through these functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from strongmax.lattice import (
    CellSet,
    Grid,
    GridBox,
    PointMassMeasure,
    WeightField,
    enumerate_boxes,
    interval_pair_arrays,
)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One real value per grid cell (outputs of the maximal operators)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values)
        if arr.shape != self.grid.sizes:
            raise ValueError(f"values shape {arr.shape} does not match grid {self.grid.sizes}")
        if arr.dtype != object:
            arr = arr.astype(np.float64)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class PerturbedIndicator:
    """The function equal to 1 on E and to gamma off E (gamma in [0, 1))."""

    E: CellSet
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.gamma < 1:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")

    def field(self, exact: bool = False) -> ScalarField:
        if exact:
            g = Fraction(self.gamma)
            vals = np.where(self.E.mask, Fraction(1), g).astype(object)
        else:
            vals = np.where(self.E.mask, 1.0, float(self.gamma))
        return ScalarField(self.E.grid, vals)


def indicator(E: CellSet, exact: bool = False) -> ScalarField:
    return PerturbedIndicator(E, 0.0).field(exact=exact)


# ---------------------------------------------------------------------------
# prefix sums


def _padded_cumsum(arr: np.ndarray, axis: int = 0) -> np.ndarray:
    """Cumulative sum with a leading zero slab along ``axis``."""
    shape = list(arr.shape)
    shape[axis] += 1
    dtype = object if arr.dtype == object else np.result_type(arr.dtype, np.float64)
    if arr.dtype.kind in "ib" and arr.dtype != object:
        dtype = np.int64
    out = np.zeros(shape, dtype=dtype)
    idx = [slice(None)] * arr.ndim
    idx[axis] = slice(1, None)
    out[tuple(idx)] = np.cumsum(arr, axis=axis)
    return out


class BoxSummer:
    """Summed-area table answering box sums in O(1) after O(#cells) setup."""

    def __init__(self, values: np.ndarray):
        arr = np.asarray(values)
        self._ndim = arr.ndim
        table = arr
        for ax in range(arr.ndim):
            table = _padded_cumsum(table, axis=ax)
        self._table = table

    def box_sum(self, b: GridBox):
        if b.dim != self._ndim:
            raise ValueError("box dimension mismatch")
        total = 0
        for corner in product((0, 1), repeat=self._ndim):
            idx = tuple(b.hi[i] if corner[i] else b.lo[i] for i in range(self._ndim))
            sign = -1 if (self._ndim - sum(corner)) % 2 else 1
            total = total + sign * self._table[idx]
        return total


def box_average(f: ScalarField, b: GridBox):
    """Arithmetic mean of ``f`` over the box. Batch callers should hold a
    :class:`BoxSummer` over ``f.values`` instead of calling this per box."""
    b.validate_on(f.grid)
    return BoxSummer(f.values).box_sum(b) / b.volume


# ---------------------------------------------------------------------------
# directional and composed operators


def _line_max_multi(v: np.ndarray) -> np.ndarray:
    """Per-cell max of interval averages along axis 0 of an (n, L) array."""
    n = v.shape[0]
    best = v.copy()
    P = _padded_cumsum(v, axis=0)
    for s in range(n):
        lens = np.arange(1, n - s + 1)
        if v.ndim > 1:
            lens = lens.reshape((-1,) + (1,) * (v.ndim - 1))
        avg = (P[s + 1 :] - P[s]) / lens
        suff = np.maximum.accumulate(avg[::-1])[::-1]
        best[s:] = np.maximum(best[s:], suff)
    return best


def line_max_field(values: np.ndarray) -> np.ndarray:
    """1D non-centered maximal function over grid intervals (exact)."""
    v = np.asarray(values)
    if v.ndim != 1:
        raise ValueError("line_max_field expects a 1D array")
    return _line_max_multi(v)


def directional_max(f: ScalarField, axis: int) -> ScalarField:
    """Max of interval averages along ``axis`` through each cell."""
    g = f.grid
    if not 0 <= axis < g.dim:
        raise ValueError(f"axis {axis} out of range for dim {g.dim}")
    v = np.moveaxis(f.values, axis, 0)
    out = _line_max_multi(v)
    return ScalarField(g, np.moveaxis(out, 0, axis))


def composed_max(f: ScalarField, axes: Sequence[int]) -> ScalarField:
    """Composition of directional operators, rightmost axis applied first."""
    axes = list(axes)
    if not axes:
        raise ValueError("composition needs at least one axis")
    for ax in axes:
        if not 0 <= ax < f.grid.dim:
            raise ValueError(f"axis {ax} out of range for dim {f.grid.dim}")
    out = f
    for ax in reversed(axes):
        out = directional_max(out, ax)
    return out


# ---------------------------------------------------------------------------
# level sets
#
# Shared engine: enumerate boxes grouped by their leading-axes intervals,
# test the predicate on vectorised last-axis interval sums, and paint every
# accepted box into a d-dimensional difference array.


def _reduced_lines(arrays: list[np.ndarray]):
    """Yield (leading (lo, hi) pairs, arrays reduced to their last axis)."""
    nd = arrays[0].ndim
    if nd == 1:
        yield (), arrays
        return
    n0 = arrays[0].shape[0]
    pads = [_padded_cumsum(a, axis=0) for a in arrays]
    for lo in range(n0):
        for hi in range(lo + 1, n0 + 1):
            reduced = [p[hi] - p[lo] for p in pads]
            for lead, rest in _reduced_lines(reduced):
                yield ((lo, hi),) + lead, rest


def _paint_boxes(diff: np.ndarray, lead: tuple, lo_acc: np.ndarray, hi_acc: np.ndarray) -> None:
    nd_lead = len(lead)
    for corner in product((0, 1), repeat=nd_lead):
        sign = -1 if sum(corner) % 2 else 1
        base = tuple(lead[i][corner[i]] for i in range(nd_lead))
        np.add.at(diff, base + (lo_acc,), sign)
        np.add.at(diff, base + (hi_acc,), -sign)


def _level_mask(num: np.ndarray, den: np.ndarray, alpha, gamma=0) -> np.ndarray:
    """Cells covered by a box with (1-gamma) num(R) > (alpha-gamma) den(R)."""
    exact = num.dtype == object or den.dtype == object
    if exact:
        alpha = Fraction(alpha)
        gamma = Fraction(gamma)
        num = num.astype(object)
        den = den.astype(object)
        one = Fraction(1)
    else:
        alpha = float(alpha)
        gamma = float(gamma)
        one = 1.0
    sizes = num.shape
    diff = np.zeros(tuple(n + 1 for n in sizes), dtype=np.int64)
    lo_t, hi_t = interval_pair_arrays(sizes[-1])
    cg = one - gamma
    ag = alpha - gamma
    for lead, (rn, rd) in _reduced_lines([num, den]):
        pn = _padded_cumsum(rn)
        pd = _padded_cumsum(rd)
        acc = cg * (pn[hi_t] - pn[lo_t]) > ag * (pd[hi_t] - pd[lo_t])
        acc = np.asarray(acc, dtype=bool)
        if acc.any():
            _paint_boxes(diff, lead, lo_t[acc], hi_t[acc])
    cover = diff
    for ax in range(cover.ndim):
        cover = np.cumsum(cover, axis=ax)
    core = tuple(slice(0, n) for n in sizes)
    return cover[core] > 0


def _check_alpha(alpha) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def strong_level_set(E: CellSet, alpha, exact: bool = False) -> CellSet:
    """{x : sup over boxes R containing x of |R cap E| / |R| > alpha}."""
    _check_alpha(alpha)
    if E.size == 0:
        raise ValueError("E must be nonempty")
    num = E.mask.astype(np.int64)
    den = np.ones(E.grid.sizes, dtype=np.int64)
    if exact:
        num = num.astype(object)
    return CellSet(E.grid, _level_mask(num, den, alpha))


def weighted_strong_level_set(E: CellSet, w: WeightField, alpha) -> CellSet:
    """Level set of the w-average operator: w(R cap E) / w(R) > alpha."""
    _check_alpha(alpha)
    if E.size == 0:
        raise ValueError("E must be nonempty")
    if w.grid != E.grid:
        raise ValueError("weight and cell set live on different grids")
    num = w.values * E.mask.astype(object if w.exact else np.int64)
    return CellSet(E.grid, _level_mask(num, w.values, alpha))


def perturbed_level_set_1d(f: PerturbedIndicator, alpha, exact: bool = False) -> CellSet:
    """1D level set {x : M(1_E + gamma 1_{E^c})(x) > alpha}, gamma < alpha."""
    _check_alpha(alpha)
    if f.E.grid.dim != 1:
        raise ValueError("perturbed_level_set_1d needs a 1D grid")
    if not f.gamma < alpha:
        raise ValueError(f"need gamma < alpha, got gamma={f.gamma} alpha={alpha}")
    num = f.E.mask.astype(np.int64)
    den = np.ones(f.E.grid.sizes, dtype=np.int64)
    if exact:
        num = num.astype(object)
    return CellSet(f.E.grid, _level_mask(num, den, alpha, gamma=f.gamma))


def point_mass_max_level_set_1d(
    mu: PointMassMeasure, members: np.ndarray, gamma, alpha
) -> np.ndarray:
    """Atoms x where some run of consecutive atoms I containing x satisfies
    (mu(E cap I) + gamma mu(E^c cap I)) / mu(I) > alpha. Returns a boolean
    array over atoms in coordinate order; ``mu`` must already be sorted."""
    _check_alpha(alpha)
    if mu.n_atoms == 0:
        raise ValueError("measure has no atoms")
    if not gamma < alpha:
        raise ValueError(f"need gamma < alpha, got gamma={gamma} alpha={alpha}")
    if list(mu.positions) != sorted(mu.positions):
        raise ValueError("atoms must be sorted by coordinate")
    members = np.asarray(members, dtype=bool)
    if members.shape != (mu.n_atoms,):
        raise ValueError("member mask must have one entry per atom")
    masses = np.array(mu.masses, dtype=object)
    if all(isinstance(m, (int, Fraction)) for m in mu.masses):
        num = masses * members
        den = masses
    else:
        masses = masses.astype(np.float64)
        num = masses * members
        den = masses
    return _level_mask(num, den, alpha, gamma=gamma)


# ---------------------------------------------------------------------------
# brute-force reference fields (the independent oracle for the fast paths)


def strong_max_field_bruteforce(f: ScalarField) -> ScalarField:
    """Per-cell supremum of box averages by direct enumeration."""
    out = f.values.copy()
    for b in enumerate_boxes(f.grid):
        avg = f.values[b.slices].sum() / b.volume
        region = out[b.slices]
        out[b.slices] = np.maximum(region, avg)
    return ScalarField(f.grid, out)


def weighted_strong_max_field_bruteforce(w: WeightField, E: CellSet) -> ScalarField:
    """Per-cell supremum of w(R cap E) / w(R) by direct enumeration."""
    if w.grid != E.grid:
        raise ValueError("weight and cell set live on different grids")
    mask = E.mask.astype(object if w.exact else np.int64)
    num = w.values * mask
    zero = Fraction(0) if w.exact else 0.0
    out = np.where(E.mask, Fraction(1) if w.exact else 1.0, zero)
    if w.exact:
        out = out.astype(object)
    for b in enumerate_boxes(w.grid):
        val = num[b.slices].sum() / w.values[b.slices].sum()
        region = out[b.slices]
        out[b.slices] = np.maximum(region, val)
    return ScalarField(w.grid, out)
