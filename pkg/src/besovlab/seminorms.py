"""The nonlocal functionals: Gagliardo and Besov seminorms, the scaled
ball-window double integral, directional and spherical shift variations,
kernel-weighted constants, mollified-seminorm constants, and the
three-region bound decomposition used by the bounds audits.

Every functional returns its q-th power; the limit identities are stated in
the q-th power and taking roots only amplifies error.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import CapabilityError, InputError
from .fields import (Field, RegionSpec, default_region, eval_field,
                     jump_set_of, support_bbox)
from .jumps import jump_variation
from .kernels import RadialKernelFamily, kernel_profile, kernel_window
from .mollifiers import MollifierSpec, mollify
from .quadrature import (QuadBudget, QuadResult, integrate_sphere,
                         default_sphere_rule, pair_integral, shift_integral,
                         sphere_measure)

__all__ = [
    "FunctionalParams",
    "FunctionalValue",
    "gagliardo_seminorm_q",
    "besov_seminorm_q",
    "brq_double_integral",
    "directional_variation",
    "spherical_variation",
    "besov_constant_at",
    "gagliardo_constant_at",
    "gagliardo_split_bounds",
    "gagliardo_region_integrals",
    "interpolation_check",
    "variation_inequality_check",
    "lq_norm_q",
    "default_shift_grid",
]


@dataclass(frozen=True)
class FunctionalParams:
    """Exponents (r, q), optional interpolation exponent p, and the region E.

    region=None resolves per field to a box holding the support plus one
    unit of margin.  `rq` is stored explicitly so the jump regime r = 1/q
    can be encoded exactly (rq == 1.0) regardless of rounding in r.
    """

    q: float
    r: float
    rq: float
    p: Optional[float] = None
    region: Optional[RegionSpec] = None

    def __post_init__(self):
        if not (self.q >= 1.0):
            raise InputError("q must be >= 1")
        if not (0.0 < self.r < 1.0):
            raise InputError("r must lie in (0, 1)")
        if self.p is not None and not (self.p > self.q):
            raise InputError("p must exceed q")

    @staticmethod
    def make(q: float, r: float, p: Optional[float] = None,
             region: Optional[RegionSpec] = None) -> "FunctionalParams":
        return FunctionalParams(q=float(q), r=float(r), rq=float(r) * float(q),
                                p=p, region=region)

    @staticmethod
    def jump_regime(q: float, p: Optional[float] = None,
                    region: Optional[RegionSpec] = None) -> "FunctionalParams":
        return FunctionalParams(q=float(q), r=1.0 / float(q), rq=1.0, p=p,
                                region=region)


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    error_estimate: float
    provenance: str

    def __float__(self):
        return self.value


def _stream_of(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


def _resolve_region(f: Field, params: FunctionalParams) -> RegionSpec:
    return params.region if params.region is not None else default_region(f)


def _result(tag: str, qr: QuadResult) -> FunctionalValue:
    return FunctionalValue(value=qr.value, error_estimate=qr.error_estimate,
                           provenance=tag)


def lq_norm_q(f: Field, q: float) -> float:
    """||u||_{L^q}^q, closed form for piecewise fields, quadrature otherwise."""
    if f.kind == "piecewise":
        return sum(float(np.linalg.norm(np.asarray(amp, dtype=float))) ** q
                   * region.measure()
                   for region, amp in f.payload["pieces"])
    if f.kind == "grid":
        spec = f.payload["spec"]
        cell = float(np.prod(spec.spacing))
        vals = np.linalg.norm(f.payload["values"], axis=-1)
        return float(np.sum(vals ** q) * cell)
    if f.dim_in == 1:
        lo, hi = support_bbox(f)
        xg, wg = leggauss(16)
        edges = np.linspace(lo[0], hi[0], 257)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * np.diff(edges)
        nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        weights = (half[:, None] * wg[None, :]).ravel()
        vals = np.linalg.norm(eval_field(f, nodes[:, None]), axis=-1) ** q
        return float(weights @ vals)
    raise CapabilityError(f"no L^q norm path for field {f.name!r}")


# ---------------------------------------------------------------------------
# Core functionals
# ---------------------------------------------------------------------------

def gagliardo_seminorm_q(f: Field, params: FunctionalParams,
                         budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """[u]^q_{W^{r,q}(E)}: double integral with weight |x-y|^{-(N+rq)}.

    Raises DivergenceError for piecewise-constant fields with jumps once
    N + rq >= N + 1, where the seminorm is infinite."""
    region = _resolve_region(f, params)
    n = f.dim_in
    s = n + params.rq
    tag = f"gagliardo_seminorm_q[f={f.name},q={params.q:g},rq={params.rq:g}]"
    bb = region.bbox()
    if bb is None:
        raise InputError("gagliardo seminorm needs a bounded region")
    diam = float(np.linalg.norm(bb[1] - bb[0]))

    def weight(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-s * np.log(t))

    qr = pair_integral(f, region, weight, (0.0, diam), params.q, budget=budget,
                       stream=_stream_of(tag), singular_exponent=s)
    return _result(tag, qr)


def default_shift_grid(f: Field, magnitudes: Optional[Sequence[float]] = None):
    """Log-spaced |h| times a direction set; the documented lower-bound grid."""
    n = f.dim_in
    lo, hi = support_bbox(f)
    scale = max(1.0, float(np.max(hi - lo)))
    if magnitudes is None:
        magnitudes = np.geomspace(1e-3 * scale, 2.0 * scale, 25)
    if n == 1:
        dirs = [np.array([1.0]), np.array([-1.0])]
    elif n == 2:
        ang = np.pi * np.arange(8) / 4.0
        dirs = [np.array([math.cos(a), math.sin(a)]) for a in ang]
    else:
        dirs = [np.eye(3)[k] * s for k in range(3) for s in (1.0, -1.0)]
    return [m * d for m in magnitudes for d in dirs]


def besov_seminorm_q(f: Field, params: FunctionalParams,
                     h_grid: Optional[Sequence] = None) -> FunctionalValue:
    """Max over the shift grid of int |u(x+h)-u(x)|^q chi_E chi_E / |h|^{rq} dx.

    A certified lower bound for the sup; provenance records the grid size."""
    region = _resolve_region(f, params)
    if h_grid is None:
        h_grid = default_shift_grid(f)
    if len(h_grid) == 0:
        raise InputError("shift grid must be nonempty")
    best = 0.0
    best_err = 0.0
    for h in h_grid:
        h = np.atleast_1d(np.asarray(h, dtype=float))
        hn = float(np.linalg.norm(h))
        if hn == 0.0:
            raise InputError("shift grid must exclude h = 0")
        val, err = shift_integral(f, region, h, params.q)
        val = val / hn ** params.rq
        if val > best:
            best, best_err = val, err / hn ** params.rq
    tag = (f"besov_seminorm_q[f={f.name},q={params.q:g},rq={params.rq:g},"
           f"grid={len(h_grid)} shifts]")
    return FunctionalValue(best, best_err, tag)


def brq_double_integral(f: Field, params: FunctionalParams, eps: float,
                        budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """int_E eps^-N int_{E cap B_eps(x)} |u(x)-u(y)|^q / |x-y|^{rq} dy dx
    (no unit-ball volume factor)."""
    if eps <= 0.0:
        raise InputError("eps must be positive")
    region = _resolve_region(f, params)
    n = f.dim_in
    tag = f"brq_double_integral[f={f.name},q={params.q:g},rq={params.rq:g},eps={eps:g}]"
    scale = eps ** -n

    def weight(t):
        t = np.asarray(t, dtype=float)
        return scale * np.exp(-params.rq * np.log(t))

    qr = pair_integral(f, region, weight, (0.0, eps), params.q, budget=budget,
                       stream=_stream_of(tag), singular_exponent=params.rq)
    return _result(tag, qr)


def directional_variation(f: Field, params: FunctionalParams, n_vec, eps: float,
                          budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """int_E chi_E(x + eps n) |u(x + eps n) - u(x)|^q / eps^{rq} dx."""
    if eps <= 0.0:
        raise InputError("eps must be positive")
    region = _resolve_region(f, params)
    n_vec = np.atleast_1d(np.asarray(n_vec, dtype=float))
    tag = (f"directional_variation[f={f.name},q={params.q:g},rq={params.rq:g},"
           f"eps={eps:g},n={n_vec.tolist()}]")
    if float(np.linalg.norm(n_vec)) == 0.0:
        return FunctionalValue(0.0, 0.0, tag)
    val, err = shift_integral(f, region, eps * n_vec, params.q,
                              budget=budget, stream=_stream_of(tag))
    scale = eps ** -params.rq
    return FunctionalValue(val * scale, err * scale, tag)


def spherical_variation(f: Field, params: FunctionalParams, eps: float,
                        rule: Optional[str] = None,
                        budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """Sphere-integrated (unnormalized) directional variation; divide by
    sphere_measure(N) for the averaged form."""
    if eps <= 0.0:
        raise InputError("eps must be positive")
    region = _resolve_region(f, params)
    n = f.dim_in
    rule = rule or default_sphere_rule(n)
    tag = (f"spherical_variation[f={f.name},q={params.q:g},rq={params.rq:g},"
           f"eps={eps:g},rule={rule}]")
    if _is_radial_indicator(f, region, eps):
        dv = directional_variation(f, params, np.eye(n)[0], eps, budget=budget)
        h = sphere_measure(n)
        return FunctionalValue(h * dv.value, h * dv.error_estimate, tag)

    def g(nodes):
        out = np.empty(nodes.shape[0])
        errs = np.empty(nodes.shape[0])
        for i, nd in enumerate(nodes):
            val, err = shift_integral(f, region, eps * nd, params.q,
                                      budget=budget, stream=_stream_of(tag) + i)
            out[i] = val
            errs[i] = err
        g.err = float(np.max(errs)) if len(errs) else 0.0
        return out

    qr = integrate_sphere(g, n, rule)
    scale = eps ** -params.rq
    err = (qr.error_estimate + sphere_measure(n) * getattr(g, "err", 0.0)) * scale
    return FunctionalValue(qr.value * scale, err, tag)


def _is_radial_indicator(f: Field, region: RegionSpec, reach: float) -> bool:
    from .quadrature import _field_is_indicator, _region_inactive
    ind = _field_is_indicator(f)
    return (ind is not None and ind[0].kind == "ball" and f.dim_in >= 2
            and _region_inactive(f, region, reach))


def besov_constant_at(f: Field, params: FunctionalParams, k: RadialKernelFamily,
                      eps, budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """Kernel-weighted double integral
    int int rho_eps(|x-y|) |u(x)-u(y)|^q / |x-y|^{rq} dy dx."""
    if k.dim != f.dim_in:
        raise InputError("kernel dimension does not match the field")
    region = _resolve_region(f, params)
    lo, hi = kernel_window(k, eps)
    eps_tag = getattr(eps, "neg_log", eps)
    tag = (f"besov_constant_at[f={f.name},q={params.q:g},rq={params.rq:g},"
           f"kernel={k.label()},eps={float(eps_tag):g}]")

    def weight(t):
        t = np.asarray(t, dtype=float)
        return kernel_profile(k, eps, t) * np.exp(-params.rq * np.log(t))

    window = (lo, hi) if lo > 0.0 else (0.0, hi)
    qr = pair_integral(f, region, weight, window, params.q, budget=budget,
                       stream=_stream_of(tag),
                       singular_exponent=params.rq if lo == 0.0 else None)
    return _result(tag, qr)


def gagliardo_constant_at(f: Field, m: MollifierSpec, params: FunctionalParams,
                          eps: float,
                          budget: Optional[QuadBudget] = None) -> FunctionalValue:
    """(1 / |ln eps|) [u * eta_(eps)]^q_{W^{r,q}(E)}."""
    if not (0.0 < eps < 1.0 / math.e):
        raise InputError("gagliardo constants need eps in (0, 1/e)")
    region = _resolve_region(f, params)
    u_eps = mollify(f, m, eps)
    inner = FunctionalParams(q=params.q, r=params.r, rq=params.rq, region=region)
    gl = gagliardo_seminorm_q(u_eps, inner, budget=budget)
    scale = 1.0 / abs(math.log(eps))
    tag = (f"gagliardo_constant_at[f={f.name},m={m.kind},q={params.q:g},"
           f"rq={params.rq:g},eps={eps:g}]")
    return FunctionalValue(gl.value * scale, gl.error_estimate * scale, tag)


# ---------------------------------------------------------------------------
# Bounds and inequality checks
# ---------------------------------------------------------------------------

def gagliardo_split_bounds(f: Field, m: MollifierSpec, params: FunctionalParams,
                           eps: float, beta: float, gamma: float):
    """The three closed-form right-hand-side bounds for the tail, annulus and
    core pieces of the mollified Gagliardo integrand."""
    if not (0.0 < beta < gamma):
        raise InputError("need 0 < beta < gamma")
    n = f.dim_in
    h = sphere_measure(n)
    q, rq = params.q, params.rq
    unorm = lq_norm_q(f, q)
    bnorm = besov_seminorm_q(f, params).value
    tail = m.abs_mass ** q * 2.0 ** q * unorm * h / (rq * gamma ** rq)
    annulus = m.abs_mass ** q * bnorm * h * (math.log(gamma) - math.log(beta))
    core = m.grad_mass ** q * 2.0 ** q * unorm * h / (q - rq) \
        * beta ** (q - rq) / eps ** q
    return tail, annulus, core


def gagliardo_region_integrals(f: Field, m: MollifierSpec,
                               params: FunctionalParams, eps: float,
                               beta: float, gamma: float,
                               budget: Optional[QuadBudget] = None):
    """Measured integrals of g^eps(z) over |z| > gamma, beta < |z| < gamma and
    |z| < beta (over all of R^N, matching the three bounds)."""
    if not (0.0 < beta < gamma):
        raise InputError("need 0 < beta < gamma")
    n = f.dim_in
    q, rq = params.q, params.rq
    s = n + rq
    u_eps = mollify(f, m, eps)
    lo, hi = support_bbox(u_eps)
    sep = 1.01 * float(np.linalg.norm(hi - lo))

    def weight(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-s * np.log(t))

    def piece(a, b):
        if b <= a:
            return 0.0, 0.0
        qr = pair_integral(u_eps, None, weight, (a, b), q, budget=budget,
                           stream=_stream_of(f"split[{a:g},{b:g},eps={eps:g}]"))
        return qr.value, qr.error_estimate

    core = piece(0.0, beta)
    annulus = piece(beta, gamma)
    body = piece(gamma, max(sep, gamma * (1.0 + 1e-9)))
    # beyond separation the shifted supports are disjoint and the integrand
    # is exactly 2 ||u_eps||_q^q with an elementary radial tail
    h = sphere_measure(n)
    tail_far = 2.0 * lq_norm_q(u_eps, q) * h * max(sep, gamma) ** (-rq) / rq
    tail = (body[0] + tail_far, body[1])
    return tail, annulus, core


def interpolation_check(f: Field, q: float, p: float):
    """lhs = [u]^q_{B^{1/q}} (shift-grid max); rhs via ||Du|| and [u]^p_{B^{1/p}}
    with alpha = (p - q)/(p - 1); the contract is lhs <= rhs."""
    if not (1.0 < q < p):
        raise InputError("need 1 < q < p")
    pq = FunctionalParams.jump_regime(q)
    pp = FunctionalParams.jump_regime(p)
    lhs = besov_seminorm_q(f, pq).value
    bp = besov_seminorm_q(f, pp).value
    tv = jump_variation(jump_set_of(f), 1.0)
    alpha = (p - q) / (p - 1.0)
    rhs = tv ** alpha * bp ** (1.0 - alpha)
    return lhs, rhs


def variation_inequality_check(f: Field, h):
    """lhs = int |u(x+h)-u(x)| / |h| dx over the support box; tv = ||Du||."""
    h = np.atleast_1d(np.asarray(h, dtype=float))
    hn = float(np.linalg.norm(h))
    if hn == 0.0:
        raise InputError("shift must be nonzero")
    val, _ = shift_integral(f, None, h, 1.0)
    tv = jump_variation(jump_set_of(f), 1.0)
    return val / hn, tv
