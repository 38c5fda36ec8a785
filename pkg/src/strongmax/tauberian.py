"""Sharp Tauberian constants: certified lower bounds by enumeration or
search, and the explicit upper-bound formulas they are compared against.

A Tauberian constant at level alpha is the worst ratio of the ambient
measure of the superlevel set {M 1_E > alpha} to the measure of E. On
grids with at most 20 cells the supremum over all nonempty cell sets is
computed exactly by enumerating every subset; larger grids use a seeded,
deterministic candidate search whose result is a certified lower bound
(every reported ratio is recomputable from its witness).

The bound evaluators reject out-of-range inputs instead of extrapolating:
each formula is only claimed on an explicit alpha range, and callers are
expected to stay inside it. ``valid_alpha_grid`` produces sample points
that sit strictly inside the range for a given exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from strongmax.lattice import (
    CellSet,
    Grid,
    GridBox,
    PointMassMeasure,
    WeightField,
    enumerate_boxes,
    weighted_measure,
)
from strongmax.maximal import (
    point_mass_max_level_set_1d,
    strong_level_set,
    weighted_strong_level_set,
)
from strongmax.weights import DominationPair

EXHAUSTIVE_CELL_CAP = 20
_OPS = ("strong", "strong_weighted", "interval_1d", "point_mass")


@dataclass(frozen=True)
class TauberianEstimate:
    """Certified lower bound on a sharp Tauberian constant.

    ``witness`` is a :class:`CellSet` for grid operators and a tuple of atom
    indices for the point-mass operator; the bound equals
    measure(level set of witness) / measure(witness) exactly.
    """

    alpha: float
    lower_bound: float
    witness: object
    method: str


@dataclass(frozen=True)
class SolyanikParams:
    """Encodes the hypothesis C(alpha) - 1 <= B (1-alpha)^(1/beta) for
    1 > alpha > 1 - exp(-gamma). ``beta`` may drop below 1 when the
    certified exponent exceeds the dimension; the domination consequence
    never uses beta >= 1."""

    B: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        if self.B < 1 or not self.beta > 0 or not self.gamma > 0:
            raise ValueError(f"need B >= 1, beta > 0, gamma > 0, got {self}")


@dataclass(frozen=True)
class AlphaSchedule:
    """Geometric threshold ladder: 1 - alpha_{j+1} = (1 - alpha_1)(1 - alpha_j)."""

    alpha1: float
    length: int

    def __post_init__(self) -> None:
        if not 0 < self.alpha1 < 1:
            raise ValueError(f"alpha1 must lie in (0, 1), got {self.alpha1}")
        if self.length < 1:
            raise ValueError("schedule length must be >= 1")

    def alphas(self) -> list[float]:
        return [1.0 - (1.0 - self.alpha1) ** j for j in range(1, self.length + 1)]


# ---------------------------------------------------------------------------
# explicit bounds


def solyanik_1d_bound(alpha: float, gamma: float, s: float) -> float:
    """(1 - 4 ((1-alpha)/(1-gamma))^s)^(-1), defined while that is positive."""
    if not 0 <= gamma < alpha < 1:
        raise ValueError(f"need 0 <= gamma < alpha < 1, got gamma={gamma} alpha={alpha}")
    if not s > 0:
        raise ValueError(f"exponent must be positive, got {s}")
    x = 4.0 * ((1.0 - alpha) / (1.0 - gamma)) ** s
    if x >= 1.0:
        raise ValueError(f"alpha={alpha} outside the valid range for s={s}, gamma={gamma}")
    return 1.0 / (1.0 - x)


def measure_1d_bound(alpha: float, gamma: float = 0.0) -> float:
    """1 + 2 (1-alpha)/(alpha-gamma); uniform over atomic measures."""
    if not 0 <= gamma < alpha < 1:
        raise ValueError(f"need 0 <= gamma < alpha < 1, got gamma={gamma} alpha={alpha}")
    return 1.0 + 2.0 * (1.0 - alpha) / (alpha - gamma)


def iter_bound(alpha1: float, m: int, s: float) -> tuple[AlphaSchedule, float]:
    """Schedule plus the m-fold bound (1 - 4 (1-alpha_1)^s)^(-m)."""
    sched = AlphaSchedule(alpha1, int(m))
    x = 4.0 * (1.0 - alpha1) ** s
    if x >= 1.0:
        raise ValueError(f"alpha1={alpha1} outside the valid range for s={s}")
    return sched, (1.0 - x) ** (-m)


def strong_bound(alpha: float, n: int, s: float) -> float:
    """(1 - 4 (1-alpha)^(s/n))^(-n), via alpha_1 = 1 - (1-alpha)^(1/n)."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not s > 0:
        raise ValueError(f"exponent must be positive, got {s}")
    x = 4.0 * (1.0 - alpha) ** (s / n)
    if x >= 1.0:
        raise ValueError(f"alpha={alpha} outside the valid range for s={s}, n={n}")
    return (1.0 - x) ** (-n)


def valid_alpha_grid(
    s: float,
    n: int = 1,
    gamma: float = 0.0,
    fracs: tuple[float, ...] = (0.9, 0.5, 0.2, 0.05, 0.01),
) -> list[float]:
    """Alphas strictly inside the validity range of the bounds above.

    Each entry sets (1-alpha) = (1-gamma) (4^(-1/s) f)^n so the critical
    quantity 4 ((1-alpha)/(1-gamma))^(s/n) evaluates to f^s < 1.
    """
    base = 4.0 ** (-1.0 / s)
    out = []
    for f in fracs:
        a = 1.0 - (1.0 - gamma) * (base * f) ** n
        if gamma < a < 1.0:
            out.append(a)
    return out


def params_from_strong_bound(n: int, s: float, n_grid: int = 512) -> SolyanikParams:
    """Package the explicit bound as (B, beta, gamma) with beta = n/s and
    gamma = (n/s) ln 8, extracting B numerically on a log-spaced grid."""
    if n < 1 or not s > 0:
        raise ValueError(f"need n >= 1 and s > 0, got n={n} s={s}")
    beta = n / s
    gamma = beta * math.log(8.0)
    x_hi = math.exp(-gamma)
    best = 1.0
    for x in np.geomspace(x_hi * 1e-9, x_hi, n_grid):
        alpha = 1.0 - float(x)
        val = (strong_bound(alpha, n, s) - 1.0) / float(x) ** (s / n)
        best = max(best, val)
    return SolyanikParams(best, beta, gamma)


def fromsol_domination(params: SolyanikParams) -> DominationPair:
    """Domination pair implied by a Solyanik hypothesis:
    (max(B, e^(gamma/beta)), 1/beta)."""
    return DominationPair(
        max(params.B, math.exp(params.gamma / params.beta)), 1.0 / params.beta
    )


def mw_reduction_threshold(alpha: float, p: float, K: float) -> float:
    """1 - K^(1/p) (1-alpha)^(1/p); needs alpha > 1 - 1/K so it is positive."""
    if p < 1 or K < 1:
        raise ValueError(f"need p >= 1 and K >= 1, got p={p} K={K}")
    if not 1.0 - 1.0 / K < alpha < 1.0:
        raise ValueError(f"alpha={alpha} out of range; need alpha > 1 - 1/K = {1 - 1 / K}")
    return 1.0 - K ** (1.0 / p) * (1.0 - alpha) ** (1.0 / p)


def _ceil_pos(x: float) -> int:
    """Smallest positive integer no less than x (so never below 1)."""
    return max(1, math.ceil(x))


def weak_type_from_tauberian(c_alpha0: float, alpha0: float, lam: float) -> float:
    """Distributional bound multiplier obtained by iterating a Tauberian
    estimate at alpha0 down to level lam."""
    if c_alpha0 < 1:
        raise ValueError(f"Tauberian constant must be >= 1, got {c_alpha0}")
    if not 0 < alpha0 < 1:
        raise ValueError(f"alpha0 must lie in (0, 1), got {alpha0}")
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    n1 = _ceil_pos(-math.log(alpha0 / lam) / math.log(alpha0))
    n2 = _ceil_pos(2.0 + max(0.0, math.log(2.0 * alpha0)) / math.log(1.0 / alpha0))
    exponent = n1 * n2 + 1
    logv = exponent * math.log(c_alpha0)
    return math.inf if logv > 700.0 else math.exp(logv)


def embedding_alpha0(ainf_star: float) -> float:
    """1 - 8^(-8 a); the anchor level used by the embedding pipeline."""
    if ainf_star < 1:
        raise ValueError(f"constant must be >= 1, got {ainf_star}")
    return 1.0 - 8.0 ** (-8.0 * ainf_star)


# ---------------------------------------------------------------------------
# planar atomic counterexample


@dataclass(frozen=True)
class DiracCounterexample:
    """Lower bound produced by one unit atom at the origin plus atoms of
    mass 1/j at (j, 1/j), each captured by the box [0, j] x [0, 1/j]."""

    n_atoms: int
    alpha: float
    lower_bound: float
    witness_js: tuple[int, ...]
    measure: PointMassMeasure


def dirac_counterexample(n: int, alpha: float) -> DiracCounterexample:
    if n < 1:
        raise ValueError(f"need at least one atom, got n={n}")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    js = np.arange(1, n + 1, dtype=np.float64)
    # box around the origin and atom j has mass 1 + 1/j, so the origin set
    # lights atom j exactly when 1/(1 + 1/j) = j/(j+1) exceeds alpha
    sel = js / (js + 1.0) > alpha
    lower = 1.0 + float(np.sum(1.0 / js[sel]))
    witness = tuple(int(j) for j in js[sel])
    positions = [(0.0, 0.0)] + [(float(j), 1.0 / float(j)) for j in range(1, n + 1)]
    masses = [1.0] + [1.0 / float(j) for j in range(1, n + 1)]
    mu = PointMassMeasure(tuple(positions), tuple(masses))
    return DiracCounterexample(n, float(alpha), lower, witness, mu)


# ---------------------------------------------------------------------------
# exhaustive constants (grids and atom lists up to 2^20 subsets)


def _subset_block(start: int, stop: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.uint64)
    return ((idx[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(bool)


def _exhaustive_intervals(
    u: np.ndarray, ambient: np.ndarray, gamma: float, alpha: float, chunk: int = 1 << 16
) -> tuple[float, np.ndarray]:
    """Exact sup over nonempty subsets for 1D interval operators.

    ``u`` carries the operator's averaging values (ones for Lebesgue
    averages, the weight or atom masses otherwise); ``ambient`` is the
    measure used in the ratio. Returns (best ratio, best member mask)."""
    n = len(u)
    total = 1 << n
    pairs = [(s, t) for s in range(n) for t in range(s + 1, n + 1)]
    cumu = np.concatenate(([0.0], np.cumsum(u)))
    cg = 1.0 - gamma
    ag = alpha - gamma
    best = -math.inf
    best_mask: np.ndarray | None = None
    for start in range(1, total, chunk):
        stop = min(start + chunk, total)
        membs = _subset_block(start, stop, n)
        ue = membs * u
        C = np.concatenate([np.zeros((len(ue), 1)), np.cumsum(ue, axis=1)], axis=1)
        level = np.zeros_like(membs)
        for s, t in pairs:
            cond = cg * (C[:, t] - C[:, s]) > ag * (cumu[t] - cumu[s])
            if cond.any():
                level[cond, s:t] = True
        ratios = (level @ ambient) / (membs @ ambient)
        j = int(np.argmax(ratios))
        if ratios[j] > best:
            best = float(ratios[j])
            best_mask = membs[j].copy()
    assert best_mask is not None
    return best, best_mask


def _exhaustive_boxes(
    g: Grid, u: np.ndarray, ambient: np.ndarray, alpha: float, chunk: int = 1 << 14
) -> tuple[float, np.ndarray]:
    """Exact sup over nonempty subsets for box operators in any dimension."""
    n = g.n_cells
    total = 1 << n
    cells_of: list[np.ndarray] = []
    for b in enumerate_boxes(g):
        mask = np.zeros(g.sizes, dtype=bool)
        mask[b.slices] = True
        cells_of.append(np.nonzero(mask.reshape(-1))[0])
    u_flat = u.reshape(-1)
    amb_flat = ambient.reshape(-1)
    den_of = [float(u_flat[c].sum()) for c in cells_of]
    best = -math.inf
    best_mask: np.ndarray | None = None
    for start in range(1, total, chunk):
        stop = min(start + chunk, total)
        membs = _subset_block(start, stop, n)
        level = np.zeros_like(membs)
        for cells, den in zip(cells_of, den_of):
            num = membs[:, cells] @ u_flat[cells]
            rows = np.nonzero(num > alpha * den)[0]
            if len(rows):
                level[np.ix_(rows, cells)] = True
        ratios = (level @ amb_flat) / (membs @ amb_flat)
        j = int(np.argmax(ratios))
        if ratios[j] > best:
            best = float(ratios[j])
            best_mask = membs[j].copy()
    assert best_mask is not None
    return best, best_mask.reshape(g.sizes)


def _resolve_grid_op(op: str, weight: WeightField | None, g: Grid | None):
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}; expected one of {_OPS}")
    if weight is None and g is None:
        raise ValueError("need a weight or a grid")
    if weight is not None:
        g = weight.grid
    amb = np.ones(g.sizes) if weight is None else weight.as_float().values
    if op == "strong_weighted":
        if weight is None:
            raise ValueError("strong_weighted needs a weight")
        u = amb
    else:
        u = np.ones(g.sizes)
    if op == "interval_1d" and g.dim != 1:
        raise ValueError("interval_1d needs a 1D grid")
    return g, u, amb


def tauberian_exhaustive(
    op: str,
    alpha: float,
    *,
    weight: WeightField | None = None,
    grid: Grid | None = None,
    mu: PointMassMeasure | None = None,
    gamma: float = 0.0,
    cell_cap: int = EXHAUSTIVE_CELL_CAP,
) -> TauberianEstimate:
    """Exact discrete Tauberian constant by enumerating all nonempty sets."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if op == "point_mass":
        if mu is None:
            raise ValueError("point_mass needs a measure")
        if mu.n_atoms == 0:
            raise ValueError("measure has no atoms")
        if mu.n_atoms > cell_cap:
            raise ValueError(f"{mu.n_atoms} atoms exceed the exhaustive cap {cell_cap}")
        if not gamma < alpha:
            raise ValueError(f"need gamma < alpha, got gamma={gamma} alpha={alpha}")
        mu = mu.sorted_1d()
        masses = np.array(mu.masses, dtype=np.float64)
        best, mask = _exhaustive_intervals(masses, masses, float(gamma), float(alpha))
        witness = tuple(int(i) for i in np.nonzero(mask)[0])
        return TauberianEstimate(float(alpha), best, witness, "exhaustive")
    if gamma != 0.0:
        raise ValueError("gamma is only meaningful for the point_mass operator")
    g, u, amb = _resolve_grid_op(op, weight, grid)
    if g.n_cells > cell_cap:
        raise ValueError(f"{g.n_cells} cells exceed the exhaustive cap {cell_cap}")
    if g.dim == 1:
        best, mask = _exhaustive_intervals(u, amb, 0.0, float(alpha))
        mask = mask.reshape(g.sizes)
    else:
        best, mask = _exhaustive_boxes(g, u, amb, float(alpha))
    return TauberianEstimate(float(alpha), best, CellSet(g, mask), "exhaustive")


# ---------------------------------------------------------------------------
# randomized-but-deterministic search


def _op_level_measure(op, E: CellSet, alpha, weight, amb_field) -> float:
    if op == "strong_weighted":
        ls = weighted_strong_level_set(E, weight, alpha)
    else:
        ls = strong_level_set(E, alpha)
    return float(weighted_measure(amb_field, ls))


def _staircase_masks(g: Grid, rng: np.random.Generator, count: int) -> Iterator[np.ndarray]:
    """Unions of k <= 5 boxes arranged monotonically (staircase unions)."""
    for _ in range(count):
        k = int(rng.integers(2, 6))
        mask = np.zeros(g.sizes, dtype=bool)
        cuts0 = np.sort(rng.choice(np.arange(1, g.sizes[0] + 1), size=min(k, g.sizes[0]), replace=False))
        prev0 = 0
        for step, c0 in enumerate(cuts0):
            if g.dim == 1:
                mask[prev0:c0] = True
            else:
                frac = (len(cuts0) - step) / len(cuts0)
                h1 = max(1, int(round(frac * g.sizes[1])))
                if g.dim == 2:
                    mask[prev0:c0, :h1] = True
                else:
                    h2 = max(1, int(round(frac * g.sizes[2])))
                    mask[prev0:c0, :h1, :h2] = True
            prev0 = c0
        if mask.any():
            yield mask


def tauberian_search(
    op: str,
    alpha: float,
    *,
    weight: WeightField | None = None,
    grid: Grid | None = None,
    budget: int = 200,
    seed: int = 0,
) -> TauberianEstimate:
    """Certified lower bound by deterministic seeded candidate search.

    Candidates, in order: every single box, complements of boxes, staircase
    box unions, random subsets at several densities, then greedy single-cell
    flips from the best set found. ``budget`` caps ratio evaluations."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if op == "point_mass":
        raise ValueError("search over atom subsets is not supported; use exhaustive")
    g, _, amb = _resolve_grid_op(op, weight, grid)
    amb_field = WeightField(g, amb)
    evals = 0
    best = -math.inf
    best_mask: np.ndarray | None = None

    def consider(mask: np.ndarray) -> bool:
        nonlocal evals, best, best_mask
        if evals >= budget:
            return False
        if not mask.any():
            return True
        E = CellSet(g, mask)
        evals += 1
        den = float(weighted_measure(amb_field, E))
        ratio = _op_level_measure(op, E, alpha, weight, amb_field) / den
        if ratio > best:
            best = ratio
            best_mask = mask.copy()
        return evals < budget

    rng = np.random.default_rng(seed)
    boxes = list(enumerate_boxes(g))
    for b in boxes:
        mask = np.zeros(g.sizes, dtype=bool)
        mask[b.slices] = True
        if not consider(mask):
            break
    for b in boxes:
        mask = np.ones(g.sizes, dtype=bool)
        mask[b.slices] = False
        if evals >= budget or not consider(mask):
            break
    if g.dim >= 2:
        for mask in _staircase_masks(g, rng, max(4, budget // 8)):
            if not consider(mask):
                break
    for density in (0.1, 0.25, 0.5, 0.75, 0.9):
        for _ in range(max(2, budget // 25)):
            mask = rng.random(g.sizes) < density
            if not consider(mask):
                break
        if evals >= budget:
            break
    # greedy single-cell flips from the incumbent
    if best_mask is not None:
        improved = True
        while improved and evals < budget:
            improved = False
            for cell in product(*(range(s) for s in g.sizes)):
                if evals >= budget:
                    break
                trial = best_mask.copy()
                trial[cell] = not trial[cell]
                if not trial.any():
                    continue
                prev = best
                consider(trial)
                if best > prev:
                    improved = True
    assert best_mask is not None
    return TauberianEstimate(float(alpha), best, CellSet(g, best_mask), "search")
