"""Discrete universe: grids of unit cells, positive weights, cell sets,
axis-aligned index boxes and finite atomic measures.

Every quantity computed downstream is a ratio of sums over cells, so the
cell measure is fixed at 1 and no physical cell width appears anywhere.
Grids have dimension 1, 2 or 3 and at most ``CELL_CAP`` cells in total.

Weight values are float64 by default. ``WeightField.as_exact`` switches to
``fractions.Fraction`` entries (dtype ``object``); all grid operations in
this package accept either representation, and the exact one is
authoritative when a floating-point comparison lands inside tolerance.

All types are immutable after construction (arrays are marked read-only)
and all operations are pure, so evaluation over disjoint inputs can run in
parallel with no shared mutable state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

CELL_CAP = 1 << 20
MAX_DIM = 3

_to_fraction = np.frompyfunc(Fraction, 1, 1)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    """Axis-aligned grid of unit cells."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(n) for n in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not 1 <= len(sizes) <= MAX_DIM:
            raise ValueError(f"grid dimension must be 1..{MAX_DIM}, got {len(sizes)}")
        if any(n < 1 for n in sizes):
            raise ValueError(f"every axis size must be >= 1, got {sizes}")
        if prod(sizes) > CELL_CAP:
            raise ValueError(f"grid has {prod(sizes)} cells, cap is {CELL_CAP}")

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @property
    def n_cells(self) -> int:
        return prod(self.sizes)

    def cells(self) -> Iterator[tuple[int, ...]]:
        yield from product(*(range(n) for n in self.sizes))


def grid(*sizes: int) -> Grid:
    """Convenience constructor: ``grid(4)``, ``grid(8, 8)``, ..."""
    return Grid(tuple(sizes))


@dataclass(frozen=True, eq=False)
class WeightField:
    """One strictly positive, finite value per grid cell."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values)
        if arr.shape != self.grid.sizes:
            raise ValueError(f"values shape {arr.shape} does not match grid {self.grid.sizes}")
        if arr.dtype != object:
            arr = arr.astype(np.float64)
            if not np.isfinite(arr).all():
                raise ValueError("weight values must be finite")
        if not (arr > 0).all():
            raise ValueError("weight values must be strictly positive")
        object.__setattr__(self, "values", _freeze(arr))

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def as_exact(self) -> "WeightField":
        """Fraction-valued copy. Floats convert exactly (binary expansion)."""
        if self.exact:
            return self
        return WeightField(self.grid, _to_fraction(self.values))

    def as_float(self) -> "WeightField":
        if not self.exact:
            return self
        return WeightField(self.grid, self.values.astype(np.float64))


@dataclass(frozen=True, eq=False)
class CellSet:
    """Finite set of grid cells with constant-time membership."""

    grid: Grid
    mask: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.mask)
        if arr.shape != self.grid.sizes:
            raise ValueError(f"mask shape {arr.shape} does not match grid {self.grid.sizes}")
        object.__setattr__(self, "mask", _freeze(arr.astype(bool)))

    @classmethod
    def empty(cls, g: Grid) -> "CellSet":
        return cls(g, np.zeros(g.sizes, dtype=bool))

    @classmethod
    def full(cls, g: Grid) -> "CellSet":
        return cls(g, np.ones(g.sizes, dtype=bool))

    @classmethod
    def from_cells(cls, g: Grid, cells: Iterable[Sequence[int]]) -> "CellSet":
        mask = np.zeros(g.sizes, dtype=bool)
        for cell in cells:
            mask[tuple(cell)] = True
        return cls(g, mask)

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, cell) -> bool:
        return bool(self.mask[tuple(cell)])

    def cells(self) -> list[tuple[int, ...]]:
        return [tuple(int(i) for i in idx) for idx in np.argwhere(self.mask)]

    def union(self, other: "CellSet") -> "CellSet":
        if self.grid != other.grid:
            raise ValueError("grid mismatch")
        return CellSet(self.grid, self.mask | other.mask)

    def same_as(self, other: "CellSet") -> bool:
        return self.grid == other.grid and bool((self.mask == other.mask).all())


@dataclass(frozen=True)
class GridBox:
    """Half-open per-axis cell-index range, nonempty on every axis."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self) -> None:
        lo = tuple(int(i) for i in self.lo)
        hi = tuple(int(i) for i in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi):
            raise ValueError("lo/hi dimension mismatch")
        if not 1 <= len(lo) <= MAX_DIM:
            raise ValueError("box dimension must be 1..3")
        for a, b in zip(lo, hi):
            if a < 0 or a >= b:
                raise ValueError(f"need 0 <= lo < hi on every axis, got {lo}..{hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> int:
        return prod(b - a for a, b in zip(self.lo, self.hi))

    @property
    def slices(self) -> tuple[slice, ...]:
        return tuple(slice(a, b) for a, b in zip(self.lo, self.hi))

    def contains(self, cell: Sequence[int]) -> bool:
        return all(a <= c < b for a, c, b in zip(self.lo, cell, self.hi))

    def validate_on(self, g: Grid) -> None:
        if self.dim != g.dim or any(b > n for b, n in zip(self.hi, g.sizes)):
            raise ValueError(f"box {self.lo}..{self.hi} does not fit grid {g.sizes}")

    def cellset(self, g: Grid) -> CellSet:
        self.validate_on(g)
        mask = np.zeros(g.sizes, dtype=bool)
        mask[self.slices] = True
        return CellSet(g, mask)


def box(lo: Sequence[int], hi: Sequence[int]) -> GridBox:
    return GridBox(tuple(lo), tuple(hi))


@dataclass(frozen=True)
class PointMassMeasure:
    """Finite atomic measure. Positions are scalars (1D) or coordinate tuples."""

    positions: tuple
    masses: tuple

    def __post_init__(self) -> None:
        pos = tuple(tuple(p) if isinstance(p, (tuple, list)) else p for p in self.positions)
        masses = tuple(self.masses)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", masses)
        if len(pos) != len(masses):
            raise ValueError("positions/masses length mismatch")
        if any(not m > 0 for m in masses):
            raise ValueError("all masses must be strictly positive")
        if len(set(pos)) != len(pos):
            raise ValueError("atom positions must be pairwise distinct")

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    @property
    def total(self):
        return sum(self.masses)

    def sorted_1d(self) -> "PointMassMeasure":
        """Atoms ordered by coordinate; positions must be scalar."""
        if any(isinstance(p, tuple) for p in self.positions):
            raise ValueError("sorted_1d requires scalar positions")
        order = sorted(range(self.n_atoms), key=lambda i: self.positions[i])
        return PointMassMeasure(
            tuple(self.positions[i] for i in order),
            tuple(self.masses[i] for i in order),
        )


# ---------------------------------------------------------------------------
# measure bookkeeping


def measure(E: CellSet) -> int:
    """Lebesgue measure of a cell set (unit cells, so the cardinality)."""
    return E.size


def weighted_measure(w: WeightField, E: CellSet):
    """w(E): sum of the weight over the members of E. Zero iff E is empty."""
    if w.grid != E.grid:
        raise ValueError("weight and cell set live on different grids")
    sel = w.values[E.mask]
    if sel.size == 0:
        return Fraction(0) if w.exact else 0.0
    return sel.sum()


def slice_1d(w: WeightField, axis: int, transverse=()) -> WeightField:
    """The 1D line of cell values along ``axis`` through the transverse index.

    ``transverse`` lists the fixed indices of the remaining axes in
    increasing axis order; an int is accepted when only one remains.
    """
    g = w.grid
    if not 0 <= axis < g.dim:
        raise ValueError(f"axis {axis} out of range for dim {g.dim}")
    tr = (transverse,) if isinstance(transverse, (int, np.integer)) else tuple(transverse)
    if len(tr) != g.dim - 1:
        raise ValueError(f"expected {g.dim - 1} transverse indices, got {len(tr)}")
    others = [j for j in range(g.dim) if j != axis]
    for j, t in zip(others, tr):
        if not 0 <= t < g.sizes[j]:
            raise ValueError(f"transverse index {t} out of range on axis {j}")
    idx: list = list(tr)
    idx.insert(axis, slice(None))
    return WeightField(Grid((g.sizes[axis],)), w.values[tuple(idx)])


def transverse_indices(g: Grid, axis: int) -> Iterator[tuple[int, ...]]:
    """All transverse index tuples for slices along ``axis``."""
    others = [g.sizes[j] for j in range(g.dim) if j != axis]
    yield from product(*(range(n) for n in others))


def axis_intervals(n: int) -> list[tuple[int, int]]:
    """All half-open index intervals [lo, hi) inside [0, n)."""
    return [(lo, hi) for lo in range(n) for hi in range(lo + 1, n + 1)]


def interval_pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised form of :func:`axis_intervals`: (lo, hi) index arrays."""
    pairs = axis_intervals(n)
    lo = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
    hi = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
    return lo, hi


def enumerate_boxes(g: Grid) -> Iterator[GridBox]:
    """Every grid box exactly once; count is prod of N_j (N_j + 1) / 2."""
    per_axis = [axis_intervals(n) for n in g.sizes]
    for combo in product(*per_axis):
        yield GridBox(tuple(c[0] for c in combo), tuple(c[1] for c in combo))


def box_count(g: Grid) -> int:
    return prod(n * (n + 1) // 2 for n in g.sizes)


# ---------------------------------------------------------------------------
# weight file round-trip
#
# JSON: {"dim": d, "sizes": [...], "values": [row-major flat]}
# CSV:  header line "dim,N1[,N2[,N3]]" then one value per line, row-major.


def save_weight(w: WeightField, path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or (path.suffix.lstrip(".").lower() or "json")
    vals = w.as_float().values
    flat = [float(v) for v in vals.reshape(-1)]
    if fmt == "json":
        doc = {"dim": w.grid.dim, "sizes": list(w.grid.sizes), "values": flat}
        path.write_text(json.dumps(doc) + "\n")
    elif fmt == "csv":
        lines = [",".join(str(n) for n in (w.grid.dim,) + w.grid.sizes)]
        lines.extend(repr(v) for v in flat)
        path.write_text("\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown weight format {fmt!r}")


def load_weight(path, fmt: str | None = None) -> WeightField:
    path = Path(path)
    fmt = fmt or (path.suffix.lstrip(".").lower() or "json")
    if fmt == "json":
        doc = json.loads(path.read_text())
        try:
            dim = int(doc["dim"])
            sizes = tuple(int(n) for n in doc["sizes"])
            flat = [float(v) for v in doc["values"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed weight file {path}: {exc}") from exc
    elif fmt == "csv":
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
        if not lines:
            raise ValueError(f"empty weight file {path}")
        head = lines[0].split(",")
        try:
            dim = int(head[0])
            sizes = tuple(int(n) for n in head[1:])
            flat = [float(ln) for ln in lines[1:]]
        except ValueError as exc:
            raise ValueError(f"malformed weight file {path}: {exc}") from exc
    else:
        raise ValueError(f"unknown weight format {fmt!r}")
    if dim != len(sizes):
        raise ValueError(f"header dim {dim} does not match {len(sizes)} sizes")
    g = Grid(sizes)
    if len(flat) != g.n_cells:
        raise ValueError(f"expected {g.n_cells} values, file has {len(flat)}")
    arr = np.array(flat, dtype=np.float64).reshape(g.sizes)
    if not (arr > 0).all():
        raise ValueError("weight file contains a nonpositive value")
    return WeightField(g, arr)
