"""Weight constants over grid intervals and boxes.

The slice-based constant takes the worst one-dimensional constant over all
axis-parallel lines of the grid; the rectangular constants take suprema
directly over boxes. The Fujii-Wilson functional reuses the same
grid-interval maximal operator as :mod:`strongmax.maximal`, so the two
modules agree on what "maximal function" means.

Every constant is computed by exhaustive enumeration (O(N^2) intervals per
line, O(prod N_j^2) boxes); nothing is sampled. The domination machinery
extracts, for a fixed multiplier B, the largest exponent s such that
``w(E) / w(I) <= B (|E| / |I|)^s`` holds for every grid interval I of every
slice and every subset E of I. The worst subset for fixed cardinality k is
the set of the k heaviest cells (rearrangement), which reduces the search
from 2^|I| subsets to |I| prefixes per interval. Constant weights on an
N-cell line therefore certify s = 1 + log(B) / log(N), and the exponent is
capped at ``S_MAX`` (only a 1-cell line is constraint-free).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import prod
from typing import Callable, Sequence

import numpy as np

from strongmax.lattice import Grid, WeightField, interval_pair_arrays
from strongmax.maximal import _padded_cumsum, _reduced_lines, line_max_field

S_MAX = 64.0
DOMINATION_B = 2.0


# ---------------------------------------------------------------------------
# one-dimensional constants


def _require_1d(w: WeightField) -> np.ndarray:
    if w.grid.dim != 1:
        raise ValueError("expected a 1D weight")
    return w.as_float().values


def _ap_1d(v: np.ndarray, p: float) -> float:
    n = len(v)
    sig = v ** (-1.0 / (p - 1.0))
    pw = _padded_cumsum(v)
    ps = _padded_cumsum(sig)
    lo, hi = interval_pair_arrays(n)
    lens = (hi - lo).astype(np.float64)
    vals = (pw[hi] - pw[lo]) / lens * ((ps[hi] - ps[lo]) / lens) ** (p - 1.0)
    return float(vals.max())


def _a1_1d(v: np.ndarray) -> float:
    n = len(v)
    P = _padded_cumsum(v)
    best = 1.0
    for lo in range(n):
        mins = np.minimum.accumulate(v[lo:])
        lens = np.arange(1, n - lo + 1, dtype=np.float64)
        avgs = (P[lo + 1 :] - P[lo]) / lens
        best = max(best, float((avgs / mins).max()))
    return best


def _fw_1d(v: np.ndarray) -> float:
    n = len(v)
    P = _padded_cumsum(v)
    best = 1.0
    for lo in range(n):
        for hi in range(lo + 1, n + 1):
            mf = line_max_field(v[lo:hi])
            best = max(best, float(mf.sum() / (P[hi] - P[lo])))
    return best


def ap_constant_1d(w: WeightField, p: float) -> float:
    """sup over intervals of (avg w) (avg w^{-1/(p-1)})^{p-1}, 1 < p < inf."""
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    return _ap_1d(_require_1d(w), float(p))


def a1_constant_1d(w: WeightField) -> float:
    """sup over intervals of (avg w) * max of 1/w on the interval."""
    return _a1_1d(_require_1d(w))


def fujii_wilson_1d(w: WeightField) -> float:
    """sup over intervals I of (1 / w(I)) * sum over I of M(w 1_I).

    For cells inside I the maximal function of w 1_I is attained on
    subintervals of I, so the inner operator is the plain grid-interval
    maximal function of the restricted line.
    """
    return _fw_1d(_require_1d(w))


# ---------------------------------------------------------------------------
# slice-based and rectangular constants


def _slices_along(values: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(values, axis, -1).reshape(-1, values.shape[axis])


def ap_star(w: WeightField, p: float) -> float:
    """Worst 1D constant over all axis-parallel slices; p in (1, inf].

    ``p = math.inf`` uses the Fujii-Wilson functional per slice.
    """
    if not p > 1:
        raise ValueError(f"p must lie in (1, inf], got {p}")
    vals = w.as_float().values
    fn = _fw_1d if p == math.inf else (lambda line: _ap_1d(line, float(p)))
    best = 1.0
    for axis in range(w.grid.dim):
        for line in _slices_along(vals, axis):
            best = max(best, fn(line))
    return best


def _box_functional_max(arrays: Sequence[np.ndarray], fn) -> float:
    """max over boxes of fn(list of per-box sums, per-box volumes)."""
    last_n = arrays[0].shape[-1]
    lo_t, hi_t = interval_pair_arrays(last_n)
    lens = (hi_t - lo_t).astype(np.float64)
    best = -math.inf
    for lead, reduced in _reduced_lines(list(arrays)):
        vol_lead = prod(hi - lo for lo, hi in lead) if lead else 1
        sums = []
        for r in reduced:
            P = _padded_cumsum(r)
            sums.append(P[hi_t] - P[lo_t])
        vals = fn(sums, lens * vol_lead)
        best = max(best, float(np.max(vals)))
    return best


def _a1_rec(values: np.ndarray) -> float:
    """max over boxes of (avg w) / (min w on the box)."""

    def rec(sum_arr: np.ndarray, min_arr: np.ndarray, vol_lead: int) -> float:
        if sum_arr.ndim == 1:
            n = sum_arr.shape[0]
            P = _padded_cumsum(sum_arr)
            best = 0.0
            for lo in range(n):
                mins = np.minimum.accumulate(min_arr[lo:])
                lens = np.arange(1, n - lo + 1, dtype=np.float64) * vol_lead
                avgs = (P[lo + 1 :] - P[lo]) / lens
                best = max(best, float((avgs / mins).max()))
            return best
        n0 = sum_arr.shape[0]
        best = 0.0
        s = None
        for lo in range(n0):
            s = None
            m = None
            for hi in range(lo + 1, n0 + 1):
                s = sum_arr[hi - 1].copy() if s is None else s + sum_arr[hi - 1]
                m = min_arr[hi - 1].copy() if m is None else np.minimum(m, min_arr[hi - 1])
                best = max(best, rec(s, m, vol_lead * (hi - lo)))
        return best

    return rec(values, values, 1)


def ap_rec(w: WeightField, p: float) -> float:
    """Rectangular constant: sup over grid boxes; p in [1, inf).

    ``p = 1`` uses the A1-type form (avg w) / (min w), which is what the
    covering sparsity bound consumes.
    """
    vals = w.as_float().values
    if p == 1:
        return max(1.0, _a1_rec(vals))
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in [1, inf), got {p}")
    q = float(p)
    sig = vals ** (-1.0 / (q - 1.0))

    def fn(sums, vols):
        return (sums[0] / vols) * ((sums[1] / vols) ** (q - 1.0))

    return _box_functional_max([vals, sig], fn)


def hruscev_rec(w: WeightField) -> float:
    """sup over boxes of (avg w) * exp(avg log(1/w)); >= 1 by AM-GM."""
    vals = w.as_float().values
    logs = np.log(vals)

    def fn(sums, vols):
        return (sums[0] / vols) * np.exp(-sums[1] / vols)

    return _box_functional_max([vals, logs], fn)


# ---------------------------------------------------------------------------
# domination exponents


@dataclass(frozen=True)
class DominationPair:
    """Certifies w(E)/w(I) <= B (|E|/|I|)^s on all tested intervals."""

    B: float
    s: float


def _dom_exp_line(v: np.ndarray, B: float, s_max: float) -> float:
    n = len(v)
    best = s_max
    if n < 2:
        return best
    logB = math.log(B)
    for lo in range(n):
        for hi in range(lo + 2, n + 1):
            seg = np.sort(v[lo:hi])[::-1]
            L = hi - lo
            tops = np.cumsum(seg)
            total = tops[-1]
            k = np.arange(1, L, dtype=np.float64)
            vals = (logB + np.log(total / tops[:-1])) / np.log(L / k)
            m = float(vals.min())
            if m < best:
                best = m
    return best


def domination_exponent(w: WeightField, B: float = DOMINATION_B, s_max: float = S_MAX) -> float:
    """Largest s <= s_max with w(E)/w(I) <= B (|E|/|I|)^s for all I, E subset I.

    For each interval and cardinality k the binding subset is the k heaviest
    cells, so the answer is the minimum over (I, k), k < |I|, of
    ``log(B w(I) / w(E_k)) / log(|I| / k)``. Lines with a single cell yield
    no constraint and report the cap.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    return _dom_exp_line(_require_1d(w), float(B), float(s_max))


def certified_exponent(w: WeightField, B: float = DOMINATION_B, s_max: float = S_MAX) -> float:
    """min over axes and slices of the per-line domination exponent at B."""
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    vals = w.as_float().values
    best = float(s_max)
    for axis in range(w.grid.dim):
        for line in _slices_along(vals, axis):
            best = min(best, _dom_exp_line(line, float(B), float(s_max)))
    return best


# ---------------------------------------------------------------------------
# reverse Holder


@dataclass(frozen=True)
class RhiReport:
    r: float
    worst_ratio: float
    bound: float | None
    holds: bool | None


def rhi_verify(w: WeightField, r: float, C: float | None = None, tol: float = 1e-9) -> RhiReport:
    """Worst box ratio (avg w^r)^{1/r} / (avg w), optionally checked <= C."""
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    vals = w.as_float().values
    powed = vals ** float(r)

    def fn(sums, vols):
        return (sums[0] / vols) ** (1.0 / r) / (sums[1] / vols)

    worst = _box_functional_max([powed, vals], fn)
    holds = None if C is None else bool(worst <= C * (1.0 + tol))
    return RhiReport(float(r), worst, C, holds)


def rhi_constant_from_domination(B: float, beta: float, r: float) -> float:
    """B^{beta/r'} ((beta'-1)/(beta'-r))^{1/r} with 1/beta + 1/beta' = 1.

    Defined for beta >= 1 and 1 < r < beta'; beta = 1 means beta' = inf and
    the parenthesis degenerates to 1.
    """
    if B < 1 or beta < 1:
        raise ValueError(f"need B >= 1 and beta >= 1, got B={B} beta={beta}")
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    rp = r / (r - 1.0)
    if beta == 1:
        return float(B ** (1.0 / rp))
    bp = beta / (beta - 1.0)
    if r >= bp:
        raise ValueError(f"formula singular: need r < beta' = {bp}, got r={r}")
    return float(B ** (beta / rp) * ((bp - 1.0) / (bp - r)) ** (1.0 / r))


def hl_norm_marcinkiewicz(r: float) -> float:
    """Model for the L^r operator norm of the 1D interval maximal operator:
    interpolation between the weak (1,1) constant 2 of the uncentered
    operator and its trivial sup bound. A configuration point, not a claim."""
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    return 2.0 * (2.0 * r / (r - 1.0)) ** (1.0 / r)


def ainfty_upper_from_domination(
    B: float,
    beta: float,
    hl_norm: Callable[[float], float] = hl_norm_marcinkiewicz,
    n_grid: int = 512,
    r_cap: float = 64.0,
) -> float:
    """inf over r in (1, beta') of HLNorm(r) * rhi constant, on a log grid."""
    if B < 1 or beta < 1:
        raise ValueError(f"need B >= 1 and beta >= 1, got B={B} beta={beta}")
    bp = math.inf if beta == 1 else beta / (beta - 1.0)
    hi = min(bp, r_cap)
    t = np.geomspace(1e-6, 1.0 - 1e-6, n_grid)
    best = math.inf
    for ti in t:
        r = 1.0 + (hi - 1.0) * float(ti)
        best = min(best, hl_norm(r) * rhi_constant_from_domination(B, beta, r))
    return best


# ---------------------------------------------------------------------------
# weight generators


def constant_weight(g: Grid, c: float) -> WeightField:
    if not c > 0:
        raise ValueError(f"constant must be positive, got {c}")
    return WeightField(g, np.full(g.sizes, float(c)))


def checkerboard_weight(g: Grid, t: float) -> WeightField:
    """1 on cells with even index-sum, t on odd; 1D gives [1, t, 1, t, ...]."""
    if not t > 0:
        raise ValueError(f"checkerboard contrast must be positive, got {t}")
    parity = np.zeros(g.sizes, dtype=np.int64)
    for axis in range(g.dim):
        shape = [1] * g.dim
        shape[axis] = g.sizes[axis]
        parity = parity + np.arange(g.sizes[axis]).reshape(shape)
    return WeightField(g, np.where(parity % 2 == 1, float(t), 1.0))


def power_weight(g: Grid, a: float, center: float = 0.0) -> WeightField:
    """Product over axes of |midpoint - center|^a, sampled at cell midpoints."""
    if not a > 0:
        raise ValueError(f"power exponent must be positive, got {a}")
    vals = np.ones(g.sizes, dtype=np.float64)
    for axis in range(g.dim):
        mids = np.arange(g.sizes[axis], dtype=np.float64) + 0.5
        line = np.abs(mids - float(center))
        if (line == 0).any():
            raise ValueError("center coincides with a cell midpoint")
        shape = [1] * g.dim
        shape[axis] = g.sizes[axis]
        vals = vals * (line**a).reshape(shape)
    return WeightField(g, vals)


def tensor_weight(*factors: Sequence[float]) -> WeightField:
    """Outer product of 1D factor lists; the grid shape follows the factors."""
    if not 1 <= len(factors) <= 3:
        raise ValueError("tensor weight needs 1 to 3 factors")
    arrays = [np.asarray(f, dtype=np.float64) for f in factors]
    for arr in arrays:
        if arr.ndim != 1 or not (arr > 0).all():
            raise ValueError("tensor factors must be positive 1D sequences")
    vals = arrays[0]
    for arr in arrays[1:]:
        vals = np.multiply.outer(vals, arr)
    return WeightField(Grid(tuple(len(a) for a in arrays)), vals)


def lognormal_weight(g: Grid, sigma: float, seed: int) -> WeightField:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if seed is None:
        raise ValueError("lognormal weight requires a seed")
    rng = np.random.default_rng(int(seed))
    return WeightField(g, np.exp(float(sigma) * rng.standard_normal(g.sizes)))


def generate_weight(g: Grid, spec: str, seed: int | None = None) -> WeightField:
    """Build a weight from a compact spec string.

    Forms: ``constant:C``, ``checkerboard:T``, ``power:A[:CENTER]``,
    ``tensor:u1,u2,..;v1,v2,..[;..]``, ``lognormal:SIGMA`` (needs seed).
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "constant":
        return constant_weight(g, float(rest))
    if kind == "checkerboard":
        return checkerboard_weight(g, float(rest))
    if kind == "power":
        parts = rest.split(":")
        center = float(parts[1]) if len(parts) > 1 else 0.0
        return power_weight(g, float(parts[0]), center)
    if kind == "tensor":
        factors = [[float(x) for x in part.split(",")] for part in rest.split(";")]
        w = tensor_weight(*factors)
        if w.grid != g:
            raise ValueError(f"tensor factors give grid {w.grid.sizes}, expected {g.sizes}")
        return w
    if kind == "lognormal":
        return lognormal_weight(g, float(rest), seed)
    raise ValueError(f"unknown weight spec {spec!r}")


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class WeightConstantsReport:
    p: float
    ap_star: float
    ap_rec: float
    fujii_wilson_per_slice_sup: float
    hruscev_rec: float
    certified_exponent_s: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "ap_star": self.ap_star,
            "ap_rec": self.ap_rec,
            "fujii_wilson_per_slice_sup": self.fujii_wilson_per_slice_sup,
            "hruscev_rec": self.hruscev_rec,
            "certified_exponent_s": self.certified_exponent_s,
        }


def constants_report(w: WeightField, p: float = 2.0) -> WeightConstantsReport:
    if not 1 < p < math.inf:
        raise ValueError(f"report needs finite p in (1, inf), got {p}")
    return WeightConstantsReport(
        p=float(p),
        ap_star=ap_star(w, p),
        ap_rec=ap_rec(w, p),
        fujii_wilson_per_slice_sup=ap_star(w, math.inf),
        hruscev_rec=hruscev_rec(w),
        certified_exponent_s=certified_exponent(w),
    )
