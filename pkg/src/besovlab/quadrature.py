"""Deterministic and stratified-Monte-Carlo integration engines.

Everything singular here is reduced through the substitution z = y - x and
polar coordinates z = t*n, so a double integral with a radial weight w(|x-y|)
becomes

    I = int_a^b t^(N-1) w(t) S(t) dt,
    S(t) = int_{S^{N-1}} F(t n) dH^{N-1}(n),
    F(h) = int chi_E(x) chi_E(x+h) |u(x+h)-u(x)|^q dx.

In 1D and for indicator fields in 2D/3D this pipeline is fully deterministic
(closed-form shift integrals plus panel Gauss-Legendre in t); otherwise the
(x, t, n) triple is sampled with log-radial strata and a counter-based RNG
stream per stratum, so parallel and serial runs reduce identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as _sciint

from .errors import CapabilityError, DivergenceError, InputError
from .fields import Field, RegionSpec, eval_field, knots_1d, support_bbox

__all__ = [
    "QuadBudget",
    "QuadResult",
    "sphere_measure",
    "sphere_rule",
    "integrate_sphere",
    "PiecewisePower",
    "radial_integral",
    "shift_integral",
    "pair_integral",
    "double_integral_singular",
    "OVERFLOW_GUARD",
]

OVERFLOW_GUARD = 1e12


@dataclass(frozen=True)
class QuadBudget:
    max_evaluations: int = 200_000
    target_rel_error: float = 1e-3
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise InputError("max_evaluations must be >= 1")
        if not (0.0 < self.target_rel_error < 1.0):
            raise InputError("target_rel_error must lie in (0, 1)")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations_used: int
    low_confidence: bool = False


def sphere_measure(n: int) -> float:
    """H^{N-1}(S^{N-1}) for N = 1, 2, 3 (2, 2*pi, 4*pi)."""
    if n == 1:
        return 2.0
    if n == 2:
        return 2.0 * math.pi
    if n == 3:
        return 4.0 * math.pi
    raise CapabilityError(f"unsupported dimension {n}")


# ---------------------------------------------------------------------------
# Sphere rules
# ---------------------------------------------------------------------------

def sphere_rule(n: int, rule: str):
    """Nodes (M, N) and weights (M,) for the unnormalized H^{N-1} integral."""
    if rule == "exact-2pt":
        if n != 1:
            raise InputError("exact-2pt applies to N=1 only")
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if rule.startswith("trapezoid-"):
        if n != 2:
            raise InputError("trapezoid rules apply to N=2 only")
        m = int(rule.split("-")[-1])
        theta = 2.0 * math.pi * np.arange(m) / m
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return nodes, np.full(m, 2.0 * math.pi / m)
    if rule.startswith("product-lat-long-"):
        if n != 3:
            raise InputError("product-lat-long rules apply to N=3 only")
        m = int(rule.split("-")[-1])
        klat = max(m // 2, 2)
        c, wlat = leggauss(klat)          # cos(phi) in [-1, 1]
        theta = 2.0 * math.pi * np.arange(m) / m
        s = np.sqrt(1.0 - c ** 2)
        nodes = np.stack([
            np.outer(s, np.cos(theta)).ravel(),
            np.outer(s, np.sin(theta)).ravel(),
            np.outer(c, np.ones(m)).ravel(),
        ], axis=-1)
        weights = np.outer(wlat, np.full(m, 2.0 * math.pi / m)).ravel()
        return nodes, weights
    raise InputError(f"unknown sphere rule {rule!r}")


def default_sphere_rule(n: int, m: int = 64) -> str:
    return {1: "exact-2pt", 2: f"trapezoid-{m}", 3: f"product-lat-long-{m}"}[n]


def _halve_rule(rule: str) -> Optional[str]:
    if rule == "exact-2pt":
        return None
    head, m = rule.rsplit("-", 1)
    m = int(m)
    if m < 8:
        return None
    return f"{head}-{m // 2}"


def integrate_sphere(g: Callable, n: int, rule: str) -> QuadResult:
    """Unnormalized integral of g over S^{N-1}; divide by sphere_measure(N)
    for the averaged form."""
    nodes, weights = sphere_rule(n, rule)
    vals = np.asarray(g(nodes), dtype=float)
    value = float(weights @ vals)
    evals = len(weights)
    coarse = _halve_rule(rule)
    if coarse is None:
        return QuadResult(value, 0.0, evals)
    cn, cw = sphere_rule(n, coarse)
    cvals = np.asarray(g(cn), dtype=float)
    err = abs(value - float(cw @ cvals))
    return QuadResult(value, err, evals + len(cw))


# ---------------------------------------------------------------------------
# Radial integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PiecewisePower:
    """Profile of the form sum_i coef_i * r^power_i on [lo_i, hi_i)."""

    pieces: tuple  # of (lo, hi, coef, power)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for lo, hi, coef, power in self.pieces:
            mask = (r >= lo) & (r < hi)
            if np.any(mask):
                # evaluate in log space; r^power can overflow for power < -1
                out[mask] += coef * np.exp(power * np.log(r[mask]))
        return out

    def moment(self, a: float, b: float, extra_power: float) -> float:
        """Exact integral of profile(r) * r^extra_power over [a, b]."""
        total = 0.0
        for lo, hi, coef, power in self.pieces:
            p0 = max(a, lo)
            p1 = min(b, hi)
            if p1 <= p0:
                continue
            p = power + extra_power
            if p1 == math.inf:
                if coef != 0.0 and p >= -1.0:
                    raise DivergenceError("divergent tail in radial integral")
                total += -coef * p0 ** (p + 1.0) / (p + 1.0)
            elif abs(p + 1.0) < 1e-14:
                if p0 == 0.0 and coef != 0.0:
                    raise DivergenceError("divergent core in radial integral")
                total += coef * (math.log(p1) - math.log(p0))
            else:
                if p0 == 0.0 and p < -1.0 and coef != 0.0:
                    raise DivergenceError("divergent core in radial integral")
                total += coef * (p1 ** (p + 1.0) - p0 ** (p + 1.0)) / (p + 1.0)
        return total


def radial_integral(profile, n: int, bounds=(0.0, math.inf)) -> float:
    """H^{N-1}(S^{N-1}) * int_a^b profile(r) r^(N-1) dr = integral of
    profile(|z|) over the annulus a <= |z| <= b in R^N."""
    a, b = float(bounds[0]), float(bounds[1])
    if not (0.0 <= a < b):
        raise InputError(f"bad radial bounds [{a}, {b}]")
    h = sphere_measure(n)
    if isinstance(profile, PiecewisePower):
        value = h * profile.moment(a, b, n - 1.0)
    else:
        val, _ = _sciint.quad(lambda r: profile(r) * r ** (n - 1), a, b, limit=200)
        value = h * val
    if not math.isfinite(value) or abs(value) > OVERFLOW_GUARD:
        raise DivergenceError("radial integral exceeded the overflow guard")
    return value


# ---------------------------------------------------------------------------
# Shift integrals  F(h) = int chi_E(x) chi_E(x+h) |u(x+h)-u(x)|^q dx
# ---------------------------------------------------------------------------

_GL_CACHE: dict = {}


def _gl(npts: int):
    if npts not in _GL_CACHE:
        x, w = leggauss(npts)
        _GL_CACHE[npts] = (x, w)
    return _GL_CACHE[npts]


def _panel_nodes(edges: np.ndarray, npts: int):
    """GL nodes/weights for every interval defined by consecutive edges."""
    x, w = _gl(npts)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _field_is_indicator(f: Field):
    """(region, amplitude) when f is a single-piece indicator, else None."""
    if f.kind != "piecewise" or len(f.payload["pieces"]) != 1:
        return None
    return f.payload["pieces"][0]


def _symdiff_measure(region: RegionSpec, h: np.ndarray) -> float:
    """Lebesgue measure of A symmetric-difference (A - h), closed form."""
    n = region.dim
    if region.kind == "ball":
        r = region.radius
        d = float(np.linalg.norm(h))
        if d >= 2.0 * r:
            overlap = 0.0
        elif n == 1:
            overlap = 2.0 * r - d
        elif n == 2:
            overlap = 2.0 * r * r * math.acos(d / (2.0 * r)) \
                - 0.5 * d * math.sqrt(4.0 * r * r - d * d)
        elif n == 3:
            overlap = math.pi * (4.0 * r + d) * (2.0 * r - d) ** 2 / 12.0
        else:
            raise CapabilityError("symmetric difference only for N <= 3")
        return 2.0 * (region.measure() - overlap)
    if region.kind == "box":
        side = np.asarray(region.hi) - np.asarray(region.lo)
        overlap = float(np.prod(np.maximum(0.0, side - np.abs(h))))
        return 2.0 * (region.measure() - overlap)
    raise CapabilityError(f"no symmetric-difference formula for {region.kind!r}")


def _region_1d_edges(region: Optional[RegionSpec]):
    if region is None:
        return []
    if region.kind == "box":
        return [region.lo[0], region.hi[0]]
    if region.kind == "half_space":
        return [region.offset / region.normal[0]]
    if region.kind == "union":
        out = []
        for p in region.parts:
            out.extend(_region_1d_edges(p))
        return out
    if region.kind == "complement":
        return _region_1d_edges(region.inner)
    raise CapabilityError(f"1D shift integral unsupported for region {region.kind!r}")


def _region_inactive(f: Field, region: Optional[RegionSpec], reach: float) -> bool:
    """True when chi_E factors cannot clip the integrand for |h| <= reach.

    The corner test is sound only for convex regions (box, ball); any other
    kind conservatively reports active."""
    if region is None:
        return True
    if region.kind not in ("box", "ball"):
        return False
    lo, hi = support_bbox(f)
    corners = np.stack(np.meshgrid(*zip(lo - reach, hi + reach), indexing="ij"),
                       axis=-1).reshape(-1, f.dim_in)
    return bool(np.all(region.contains(corners)))


def shift_integral(f: Field, region: Optional[RegionSpec], h, q: float,
                   budget: Optional[QuadBudget] = None, stream: int = 0):
    """F(h) with one-sigma-free deterministic paths where available.

    Returns (value, error_estimate).  region=None integrates over R^N.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    if h.shape != (f.dim_in,):
        raise InputError("shift vector dimension mismatch")
    hnorm = float(np.linalg.norm(h))
    if hnorm == 0.0:
        return 0.0, 0.0
    ind = _field_is_indicator(f)
    if ind is not None and f.dim_in >= 2 and ind[0].kind in ("ball", "box") \
            and _region_inactive(f, region, hnorm):
        amp = float(np.linalg.norm(np.asarray(ind[1], dtype=float)))
        return amp ** q * _symdiff_measure(ind[0], h), 0.0
    if f.dim_in == 1:
        return _shift_integral_1d(f, region, float(h[0]), q)
    return _shift_integral_mc(f, region, h, q, budget or QuadBudget(), stream)


def _merged_edges_1d(f: Field, region, t: float):
    ks = knots_1d(f)
    base = [] if ks is None else list(ks)
    edges = set(base) | {k - t for k in base} | set(_region_1d_edges(region)) \
        | {e - t for e in _region_1d_edges(region)}
    lo_s, hi_s = support_bbox(f)
    lo = min(lo_s[0], lo_s[0] - t)
    hi = max(hi_s[0], hi_s[0] - t)
    if region is not None and region.kind == "box":
        lo = max(lo, region.lo[0] - abs(t))
        hi = min(hi, region.hi[0] + abs(t))
    edges |= {lo, hi}
    edges = np.array(sorted(e for e in edges if lo <= e <= hi))
    return edges, lo, hi


def _quality_1d(f: Field) -> dict:
    """Panel counts/orders per field cost class: closed-form fields get the
    dense settings, nested-quadrature fields the cheap ones."""
    if f.kind == "smooth" and f.payload.get("formula") == "callable_1d":
        return {"t_panels": 28, "t_order": 8, "x_div": 40, "x_orders": (8, 4)}
    if f.kind == "grid":
        return {"t_panels": 36, "t_order": 8, "x_div": 64, "x_orders": (6, 3)}
    return {"t_panels": 48, "t_order": 12, "x_div": 64, "x_orders": (12, 6)}


def _shift_integral_1d(f: Field, region, t: float, q: float,
                       x_div: int = 64, x_orders=(12, 6)):
    edges, lo, hi = _merged_edges_1d(f, region, t)
    if hi <= lo or len(edges) < 2:
        return 0.0, 0.0
    if f.kind == "piecewise":
        # integrand is constant on every merged interval: exact
        mids = 0.5 * (edges[1:] + edges[:-1])
        lens = np.diff(edges)
        vals = _pair_values(f, region, mids, t, q)
        return float(lens @ vals), 0.0
    # piecewise-smooth: panel Gauss-Legendre with an embedded error estimate
    pmax = (hi - lo) / x_div
    refined = [edges[0]]
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((b - a) / pmax)))
        refined.extend(a + (b - a) * np.arange(1, k + 1) / k)
    redges = np.array(refined)
    nhi, whi = _panel_nodes(redges, x_orders[0])
    nlo, wlo = _panel_nodes(redges, x_orders[1])
    vhi = float(whi @ _pair_values(f, region, nhi, t, q))
    vlo = float(wlo @ _pair_values(f, region, nlo, t, q))
    return vhi, abs(vhi - vlo)


def _pair_values(f: Field, region, xs: np.ndarray, t: float, q: float):
    pts = xs[:, None]
    du = eval_field(f, pts + t) - eval_field(f, pts)
    vals = np.linalg.norm(du, axis=-1) ** q
    if region is not None:
        vals = vals * region.contains(pts) * region.contains(pts + t)
    return vals


def _stream_rng(seed: int, stream: int, stratum: int):
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                    np.uint64(((stream & 0xFFFFFFFFF) << 24) | (stratum & 0xFFFFFF))],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _sample_box(f: Field, region, reach: float):
    lo_s, hi_s = support_bbox(f)
    lo, hi = lo_s - reach, hi_s + reach
    if region is not None:
        bb = region.bbox()
        if bb is not None:
            lo = np.maximum(lo, bb[0])
            hi = np.minimum(hi, bb[1])
    return lo, hi


def _shift_integral_mc(f: Field, region, h: np.ndarray, q: float,
                       budget: QuadBudget, stream: int):
    lo, hi = _sample_box(f, region, float(np.linalg.norm(h)))
    if np.any(hi <= lo):
        return 0.0, 0.0
    vol = float(np.prod(hi - lo))
    m = min(budget.max_evaluations, 200_000)
    rng = _stream_rng(budget.rng_seed, stream, 0)
    x = lo + (hi - lo) * rng.random((m, f.dim_in))
    du = eval_field(f, x + h) - eval_field(f, x)
    vals = np.linalg.norm(du, axis=-1) ** q
    if region is not None:
        vals = vals * region.contains(x) * region.contains(x + h)
    value = vol * float(np.mean(vals))
    err = 2.0 * vol * float(np.std(vals)) / math.sqrt(m)
    return value, err


# ---------------------------------------------------------------------------
# The radially-weighted pair integral engine
# ---------------------------------------------------------------------------

def _t_integral(tfunc: Callable, a: float, b: float, kinks: Sequence[float] = (),
                n_panels: int = 48, order: int = 12, truncated_at: float = 0.0):
    """Panel Gauss-Legendre of tfunc over log-spaced panels of [a, b].

    tfunc maps an array of radii to integrand values.  Returns (value, err)
    with err from an embedded lower-order rule; when the window was clipped
    at a > truncated_at, the clipped mass estimate a * |tfunc(a)| joins err.
    """
    if b <= a:
        return 0.0, 0.0
    edges = np.geomspace(a, b, n_panels + 1)
    inner = [k for k in kinks if a < k < b]
    if inner and len(inner) <= 64:
        edges = np.unique(np.concatenate([edges, np.asarray(inner, dtype=float)]))
    nhi, whi = _panel_nodes(edges, order)
    nlo, wlo = _panel_nodes(edges, max(order // 2, 2))
    vhi = float(whi @ np.asarray(tfunc(nhi), dtype=float))
    vlo = float(wlo @ np.asarray(tfunc(nlo), dtype=float))
    err = abs(vhi - vlo)
    if a > truncated_at:
        err += 2.0 * a * abs(float(np.asarray(tfunc(np.array([a])), dtype=float)[0]))
    return vhi, err


def _pair_kinks(f: Field, b: float):
    ks = knots_1d(f)
    if ks is not None and len(ks) <= 32:
        diffs = np.abs(ks[:, None] - ks[None, :]).ravel()
        return sorted(set(float(d) for d in diffs if 0.0 < d < b))
    ind = _field_is_indicator(f)
    if ind is not None:
        region = ind[0]
        if region.kind == "ball":
            return [2.0 * region.radius] if 2.0 * region.radius < b else []
        if region.kind == "box":
            side = np.asarray(region.hi) - np.asarray(region.lo)
            ks = list(side) + [float(np.linalg.norm(side))]
            return sorted(set(k for k in ks if k < b))
    return []


def _has_jumps(f: Field) -> bool:
    if f.kind != "piecewise":
        return False
    return any(np.linalg.norm(np.asarray(a, dtype=float)) > 0.0
               for _, a in f.payload["pieces"])


def pair_integral(f: Field, region: Optional[RegionSpec], weight: Callable,
                  window, q: float, budget: Optional[QuadBudget] = None,
                  stream: int = 0, sphere_rule_name: Optional[str] = None,
                  singular_exponent: Optional[float] = None) -> QuadResult:
    """integral over E x E of  weight(|x-y|) |u(x)-u(y)|^q  dy dx.

    weight is a vectorized radial function; window = (a, b) limits |x - y|.
    singular_exponent s (weight ~ t^-s near 0) enables the analytic
    divergence check for fields with jumps.
    """
    budget = budget or QuadBudget()
    n = f.dim_in
    a, b = float(window[0]), float(window[1])
    if not (0.0 <= a < b) or not math.isfinite(b):
        raise InputError(f"bad pair-integral window [{a}, {b}]")
    if singular_exponent is not None and a == 0.0 and _has_jumps(f) \
            and singular_exponent >= n + 1.0:
        raise DivergenceError(
            f"weight exponent {singular_exponent} >= N+1 diverges on a jump field")
    kinks = _pair_kinks(f, b)
    h_meas = sphere_measure(n)

    if n == 1:
        quality = _quality_1d(f)

        def tfunc(ts):
            out = np.empty_like(ts)
            for i, t in enumerate(ts):
                out[i] = _shift_integral_1d(f, region, float(t), q,
                                            x_div=quality["x_div"],
                                            x_orders=quality["x_orders"])[0]
            return 2.0 * out * np.asarray(weight(ts), dtype=float)
        t0 = a if a > 0.0 else b * 1e-9
        value, err = _t_integral(tfunc, t0, b, kinks,
                                 n_panels=quality["t_panels"],
                                 order=quality["t_order"], truncated_at=a)
        _guard(value)
        return QuadResult(value, err, 0, low_confidence=False)

    ind = _field_is_indicator(f)
    if ind is not None and ind[0].kind == "ball" and _region_inactive(f, region, b):
        amp = float(np.linalg.norm(np.asarray(ind[1], dtype=float))) ** q

        def tfunc(ts):
            sym = np.array([_symdiff_measure(ind[0], np.array([t] + [0.0] * (n - 1)))
                            for t in ts])
            return ts ** (n - 1) * np.asarray(weight(ts), dtype=float) * h_meas * amp * sym
        t0 = a if a > 0.0 else b * 1e-9
        value, err = _t_integral(tfunc, t0, b, kinks, truncated_at=a)
        _guard(value)
        return QuadResult(value, err, 0, low_confidence=False)

    if ind is not None and ind[0].kind == "box" and _region_inactive(f, region, b):
        amp = float(np.linalg.norm(np.asarray(ind[1], dtype=float))) ** q
        nodes, wts = sphere_rule(n, sphere_rule_name or default_sphere_rule(n))

        def tfunc(ts):
            out = np.empty_like(ts)
            for i, t in enumerate(ts):
                sym = np.array([_symdiff_measure(ind[0], t * nd) for nd in nodes])
                out[i] = float(wts @ sym) * amp
            return ts ** (n - 1) * np.asarray(weight(ts), dtype=float) * out
        t0 = a if a > 0.0 else b * 1e-9
        value, err = _t_integral(tfunc, t0, b, kinks, n_panels=32, truncated_at=a)
        _guard(value)
        return QuadResult(value, err, 0, low_confidence=False)

    return _pair_integral_mc(f, region, weight, (a, b), q, budget, stream)


def _guard(value: float):
    if not math.isfinite(value) or abs(value) > OVERFLOW_GUARD:
        raise DivergenceError("pair integral exceeded the overflow guard")


def _unit_directions(rng, m: int, n: int) -> np.ndarray:
    if n == 2:
        theta = 2.0 * math.pi * rng.random(m)
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    v = rng.standard_normal((m, n))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _pair_integral_mc(f: Field, region, weight, window, q, budget: QuadBudget,
                      stream: int) -> QuadResult:
    n = f.dim_in
    a, b = window
    t_lo = a if a > 0.0 else b * 1e-6
    # keep the sample count within the budget: evaluations_used counts
    # integrand samples, never more than max_evaluations
    n_strata = min(32, max(1, budget.max_evaluations // 64))
    edges = np.geomspace(t_lo, b, n_strata + 1)
    lo_x, hi_x = _sample_box(f, region, b)
    if np.any(hi_x <= lo_x):
        return QuadResult(0.0, 0.0, 0)
    vol = float(np.prod(hi_x - lo_x))
    h_meas = sphere_measure(n)
    per = max(budget.max_evaluations // n_strata, 1)
    total = 0.0
    var_sum = 0.0
    evals = 0
    for i in range(n_strata):
        lo_t, hi_t = float(edges[i]), float(edges[i + 1])
        ln_ratio = math.log(hi_t / lo_t)
        rng = _stream_rng(budget.rng_seed, stream, i)
        t = lo_t * np.exp(ln_ratio * rng.random(per))
        dirs = _unit_directions(rng, per, n)
        x = lo_x + (hi_x - lo_x) * rng.random((per, n))
        shift = t[:, None] * dirs
        du = eval_field(f, x + shift) - eval_field(f, x)
        vals = np.linalg.norm(du, axis=-1) ** q
        if region is not None:
            vals = vals * region.contains(x) * region.contains(x + shift)
        # 1/p(t) = t * ln_ratio for the log-uniform radial draw
        vals = vals * np.asarray(weight(t), dtype=float) * t ** (n - 1) \
            * (t * ln_ratio) * h_meas * vol
        mean = float(np.mean(vals))
        se = float(np.std(vals)) / math.sqrt(per)
        total += mean
        var_sum += se * se
        evals += per
        _guard(total)
    err = 2.0 * math.sqrt(var_sum)
    low = err > budget.target_rel_error * max(abs(total), 1e-300)
    return QuadResult(total, err, evals, low_confidence=low)


# ---------------------------------------------------------------------------
# Public singular double integral
# ---------------------------------------------------------------------------

def _window_bounds(window, region: Optional[RegionSpec], f: Field):
    if region is not None:
        bb = region.bbox()
        if bb is None:
            raise InputError("double_integral_singular needs a bounded region")
        diam = float(np.linalg.norm(bb[1] - bb[0]))
    else:
        lo, hi = support_bbox(f)
        diam = 2.0 * float(np.linalg.norm(hi - lo))
    if window is None or window == "full" or (isinstance(window, tuple) and window[0] == "full"):
        return 0.0, diam
    if isinstance(window, tuple) and window[0] == "ball":
        return 0.0, float(window[1])
    if isinstance(window, tuple) and window[0] == "annulus":
        return float(window[1]), min(float(window[2]), diam)
    raise InputError(f"unknown window spec {window!r}")


def double_integral_singular(f: Field, region: Optional[RegionSpec], s: float,
                             q: float, window, budget: Optional[QuadBudget] = None,
                             stream: int = 0) -> QuadResult:
    """Estimate the double integral of |u(x)-u(y)|^q / |x-y|^s over E x E
    restricted to |x-y| inside the window ("full", ("ball", eps) or
    ("annulus", beta, gamma))."""
    a, b = _window_bounds(window, region, f)

    def weight(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-s * np.log(t))

    return pair_integral(f, region, weight, (a, b), q, budget=budget,
                         stream=stream, singular_exponent=s if a == 0.0 else None)
