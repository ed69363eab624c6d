"""W^{1,1} mollifier families, their scalings, and convolution with fields.

Shipped kinds: "tent", "truncated-gaussian" (cut at 6 sigma, renormalized to
unit mass), "smooth-bump", "signed-test" (derivative of the bump, zero total
mass), and "mix" (an affine combination, used to perturb a mollifier).  All
kinds carry closed-form or precomputed CDFs in 1D, so mollifying a 1D step
field stays a closed-form expression; everything else goes through direct
grid convolution at resolution eps/8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate as _sciint
from scipy import ndimage as _ndi
from scipy.special import erf

from .errors import CapabilityError, InputError, ResolutionError
from .fields import Field, GridSpec, eval_field, sample, support_bbox
from .quadrature import sphere_measure

__all__ = ["MollifierSpec", "make_mollifier", "mollify", "mollifier_bound_check"]


@dataclass(frozen=True)
class MollifierSpec:
    kind: str
    dim: int
    halfwidth: float              # support radius of eta
    total: float                  # int eta
    abs_mass: float               # int |eta|
    grad_mass: float              # int |grad eta|
    pdf: Callable = field(repr=False)          # eta(v), radial arg for dim >= 2
    grad_abs: Callable = field(repr=False)     # |eta'(v)| (1D) or |d/dr profile| (radial)
    cdf: Optional[Callable] = field(repr=False, default=None)  # 1D only

    def weighted_grad(self, rq: float) -> float:
        """int |grad eta(v)| (|v| + 2)^{rq} dv."""
        return self._radial_moment(self.grad_abs, lambda r: (r + 2.0) ** rq)

    def abs_weighted_moment(self, rq: float) -> float:
        """int |eta(v)| |v|^{rq} dv."""
        return self._radial_moment(lambda r: np.abs(self.pdf(r)), lambda r: r ** rq)

    def _radial_moment(self, g: Callable, w: Callable) -> float:
        if self.dim == 1:
            val, _ = _sciint.quad(lambda v: g(abs(v)) * w(abs(v)),
                                  -self.halfwidth, self.halfwidth,
                                  points=[0.0], limit=200)
            return float(val)
        h = sphere_measure(self.dim)
        val, _ = _sciint.quad(lambda r: g(r) * w(r) * r ** (self.dim - 1),
                              0.0, self.halfwidth, limit=200)
        return float(h * val)


# ---------------------------------------------------------------------------
# 1D profiles
# ---------------------------------------------------------------------------

def _tent_pdf(v):
    v = np.abs(np.asarray(v, dtype=float))
    return np.maximum(0.0, 1.0 - v)


def _tent_cdf(w):
    w = np.asarray(w, dtype=float)
    out = np.where(w <= 0.0, 0.5 * (1.0 + np.clip(w, -1.0, 0.0)) ** 2,
                   1.0 - 0.5 * (1.0 - np.clip(w, 0.0, 1.0)) ** 2)
    return out


_GAUSS_CUT = 6.0
_GAUSS_Z = float(erf(_GAUSS_CUT / math.sqrt(2.0)))


def _gauss_pdf(v):
    v = np.asarray(v, dtype=float)
    out = np.exp(-0.5 * v * v) / (math.sqrt(2.0 * math.pi) * _GAUSS_Z)
    return np.where(np.abs(v) <= _GAUSS_CUT, out, 0.0)


def _gauss_cdf(w):
    w = np.clip(np.asarray(w, dtype=float), -_GAUSS_CUT, _GAUSS_CUT)
    return (erf(w / math.sqrt(2.0)) - erf(-_GAUSS_CUT / math.sqrt(2.0))) / (2.0 * _GAUSS_Z)


def _bump_raw(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - v[inside] ** 2))
    return out


_BUMP_NORM = 1.0 / _sciint.quad(lambda v: float(_bump_raw(v)), -1.0, 1.0, limit=200)[0]


def _bump_pdf(v):
    return _BUMP_NORM * _bump_raw(v)


def _bump_grad(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    vi = v[inside]
    out[inside] = _BUMP_NORM * np.exp(-1.0 / (1.0 - vi ** 2)) \
        * (-2.0 * vi) / (1.0 - vi ** 2) ** 2
    return out


class _TableCDF:
    """Cumulative integral of a pdf on [-hw, hw], tabulated once."""

    def __init__(self, pdf: Callable, hw: float, m: int = 8192):
        xs = np.linspace(-hw, hw, m + 1)
        mid = 0.5 * (xs[1:] + xs[:-1])
        steps = np.diff(xs) * pdf(mid)
        self.xs = xs
        self.cum = np.concatenate([[0.0], np.cumsum(steps)])
        self.hw = hw

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return np.interp(w, self.xs, self.cum, left=0.0, right=self.cum[-1])


def make_mollifier(kind: str, dim: int = 1, **params) -> MollifierSpec:
    if dim not in (1, 2, 3):
        raise InputError("mollifier dimension must be 1, 2 or 3")
    if kind == "tent":
        if dim == 1:
            return MollifierSpec("tent", 1, 1.0, 1.0, 1.0, 2.0,
                                 pdf=_tent_pdf, grad_abs=lambda v: 1.0 * (np.asarray(v) < 1.0),
                                 cdf=_tent_cdf)
        # radial tent c (1 - r)+ normalized to unit mass
        h = sphere_measure(dim)
        mass_raw = h * _sciint.quad(lambda r: (1.0 - r) * r ** (dim - 1), 0.0, 1.0)[0]
        c = 1.0 / mass_raw
        return MollifierSpec("tent", dim, 1.0, 1.0, 1.0, c * h / dim,
                             pdf=lambda r: c * np.maximum(0.0, 1.0 - np.asarray(r, dtype=float)),
                             grad_abs=lambda r: c * (np.asarray(r) < 1.0))
    if kind in ("truncated-gaussian", "gauss"):
        if dim != 1:
            raise CapabilityError("truncated gaussian is shipped in 1D only")
        phi0 = math.exp(0.0) / (math.sqrt(2.0 * math.pi) * _GAUSS_Z)
        phic = math.exp(-0.5 * _GAUSS_CUT ** 2) / (math.sqrt(2.0 * math.pi) * _GAUSS_Z)
        grad = 2.0 * (phi0 - phic)
        return MollifierSpec("truncated-gaussian", 1, _GAUSS_CUT, 1.0, 1.0, grad,
                             pdf=_gauss_pdf,
                             grad_abs=lambda v: np.abs(np.asarray(v)) * _gauss_pdf(v),
                             cdf=_gauss_cdf)
    if kind in ("smooth-bump", "bump"):
        if dim != 1:
            raise CapabilityError("smooth bump is shipped in 1D only")
        grad = 2.0 * float(_bump_pdf(0.0))
        return MollifierSpec("smooth-bump", 1, 1.0, 1.0, 1.0, grad,
                             pdf=_bump_pdf, grad_abs=lambda v: np.abs(_bump_grad(v)),
                             cdf=_TableCDF(_bump_pdf, 1.0))
    if kind in ("signed-test", "signed_bump"):
        if dim != 1:
            raise CapabilityError("the signed-test mollifier is shipped in 1D only")
        abs_mass = 2.0 * float(_bump_pdf(0.0))
        grad_mass, _ = _sciint.quad(lambda v: abs(_d_bump_grad(v)), -1.0, 1.0,
                                    points=[0.0], limit=200)
        return MollifierSpec("signed-test", 1, 1.0, 0.0, abs_mass, float(grad_mass),
                             pdf=_bump_grad, grad_abs=lambda v: np.abs(_d_bump_grad(v)),
                             cdf=_bump_pdf)
    if kind == "mix":
        comps = params["components"]      # iterable of (weight, MollifierSpec)
        if any(c.dim != dim for _, c in comps):
            raise InputError("mix components must share the dimension")
        hw = max(c.halfwidth for _, c in comps)
        total = sum(w * c.total for w, c in comps)

        def pdf(v):
            return sum(w * c.pdf(v) for w, c in comps)

        def grad_signed(v):
            # only valid when components carry signed gradients; used via abs
            return sum(w * _signed_grad(c)(v) for w, c in comps)

        abs_mass, _ = _sciint.quad(lambda v: abs(float(pdf(v))), -hw, hw,
                                   points=[0.0], limit=400)
        grad_mass, _ = _sciint.quad(lambda v: abs(float(grad_signed(v))), -hw, hw,
                                    points=[-1.0, 0.0, 1.0], limit=400)
        cdf = None
        if all(c.cdf is not None for _, c in comps):
            def cdf(w, _comps=tuple(comps)):
                return sum(wt * c.cdf(w) for wt, c in _comps)
        return MollifierSpec("mix", dim, hw, float(total), float(abs_mass),
                             float(grad_mass), pdf=pdf,
                             grad_abs=lambda v: np.abs(grad_signed(v)), cdf=cdf)
    raise InputError(f"unknown mollifier kind {kind!r}")


def _d_bump_grad(v):
    """Second derivative of the normalized bump (for grad mass of signed-test)."""
    v = float(v)
    if abs(v) >= 1.0:
        return 0.0
    s = 1.0 - v * v
    e = math.exp(-1.0 / s)
    # d/dv [ -2v / s^2 * e ] = e * ( (-2/s^2 - 8v^2/s^3) + (4 v^2 / s^4) )
    return _BUMP_NORM * e * (-2.0 / s ** 2 - 8.0 * v * v / s ** 3 + 4.0 * v * v / s ** 4)


def _signed_grad(m: MollifierSpec) -> Callable:
    if m.kind == "tent":
        return lambda v: -np.sign(np.asarray(v, dtype=float)) * (np.abs(np.asarray(v)) < 1.0)
    if m.kind == "truncated-gaussian":
        return lambda v: -np.asarray(v, dtype=float) * _gauss_pdf(v)
    if m.kind == "smooth-bump":
        return _bump_grad
    if m.kind == "signed-test":
        return lambda v: np.vectorize(_d_bump_grad)(v)
    raise CapabilityError(f"no signed gradient for mollifier kind {m.kind!r}")


# ---------------------------------------------------------------------------
# Mollification
# ---------------------------------------------------------------------------

def _steps_of_1d_piecewise(f: Field):
    steps = []
    for region, amp in f.payload["pieces"]:
        regions = region.parts if region.kind == "union" else (region,)
        for r in regions:
            if r.kind != "box":
                return None
            steps.append((r.lo[0], r.hi[0], np.asarray(amp, dtype=float)))
    return steps


def mollify(f: Field, m: MollifierSpec, eps: float) -> Field:
    """u_eps = u * eta_(eps); closed form for 1D step sums, grid convolution
    (direct summation, zero padding) otherwise."""
    if eps <= 0.0:
        raise InputError("mollification scale must be positive")
    if m.dim != f.dim_in:
        raise InputError("mollifier dimension does not match the field")
    if f.kind == "smooth" and f.payload.get("formula") == "constant":
        value = np.asarray(f.payload["params"]["value"], dtype=float) * m.total
        payload = {"formula": "constant", "params": {"value": value}}
        return Field(f.dim_in, f.dim_out, "smooth", payload,
                     support_radius=f.support_radius, name=f"{f.name}*[{m.kind}]")
    if f.dim_in == 1 and f.kind == "piecewise" and m.cdf is not None:
        steps = _steps_of_1d_piecewise(f)
        if steps is not None:
            payload = {"formula": "steps_cdf",
                       "params": {"steps": tuple(steps), "eps": float(eps)},
                       "cdf": m.cdf, "cdf_halfwidth": m.halfwidth}
            rad = f.support_radius + eps * m.halfwidth
            return Field(1, f.dim_out, "smooth", payload, support_radius=rad,
                         name=f"{f.name}*[{m.kind}@{eps:g}]")
    if f.dim_in == 1 and f.kind == "smooth":
        return _mollify_smooth_quadrature(f, m, eps)
    return _mollify_grid(f, m, eps)


def _mollify_smooth_quadrature(f: Field, m: MollifierSpec, eps: float) -> Field:
    """Evaluate u_eps(x) = int eta(z) u(x - eps z) dz by fixed panel GL."""
    from numpy.polynomial.legendre import leggauss
    xg, wg = leggauss(12)
    panels = np.linspace(-m.halfwidth, m.halfwidth, 9)
    mid = 0.5 * (panels[1:] + panels[:-1])
    half = 0.5 * np.diff(panels)
    z = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel() * np.asarray(m.pdf(np.abs(z))
                                                           if m.kind != "signed-test"
                                                           else m.pdf(z), dtype=float)

    base = f

    def evaluate(xs: np.ndarray) -> np.ndarray:
        pts = (xs[:, None] - eps * z[None, :]).reshape(-1, 1)
        vals = eval_field(base, pts).reshape(xs.shape[0], z.size, base.dim_out)
        return np.einsum("k,mkd->md", w, vals)

    payload = {"formula": "callable_1d", "params": {"eps": eps}, "call": evaluate}
    rad = f.support_radius + eps * m.halfwidth
    return Field(1, f.dim_out, "smooth", payload, support_radius=rad,
                 name=f"{f.name}*[{m.kind}@{eps:g}]")


def _mollify_grid(f: Field, m: MollifierSpec, eps: float) -> Field:
    n = f.dim_in
    h = eps / 8.0
    if f.kind == "grid":
        src = max(f.payload["spec"].spacing)
        if eps < 8.0 * src:
            raise ResolutionError(
                f"eps={eps:g} below 8x source grid spacing {src:g}")
    lo, hi = support_bbox(f)
    pad = eps * m.halfwidth + 2.0 * h
    lo, hi = lo - pad, hi + pad
    extent = tuple(int(math.ceil((hi[k] - lo[k]) / h)) for k in range(n))
    cells = float(np.prod(np.asarray(extent, dtype=float)))
    if cells > 3.2e7:
        raise CapabilityError(
            f"mollification at eps={eps:g} needs a {extent} grid "
            f"({cells:.2e} cells) at resolution eps/8; raise eps or shrink the sweep")
    spec = GridSpec(origin=tuple(lo), spacing=(h,) * n, extent=extent)
    base = sample(f, spec)
    values = base.payload["values"]

    reach = int(math.ceil(eps * m.halfwidth / h))
    axes = [np.arange(-reach, reach + 1) * h for _ in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    radii = np.sqrt(sum(mm ** 2 for mm in mesh))
    if n == 1 and m.kind == "signed-test":
        taps = m.pdf(mesh[0] / eps) / eps * h ** n
    else:
        taps = m.pdf(radii / eps) / eps ** n * h ** n
    if m.total != 0.0:
        taps = taps * (m.total / taps.sum())
    out = np.empty_like(values)
    for di in range(f.dim_out):
        out[..., di] = _ndi.convolve(values[..., di], taps, mode="constant", cval=0.0)
    payload = {"spec": spec, "values": out, "source": f.name}
    rad = f.support_radius + eps * m.halfwidth
    return Field(n, f.dim_out, "grid", payload, support_radius=rad,
                 name=f"{f.name}*[{m.kind}@{eps:g}]")


def mollifier_bound_check(f: Field, m: MollifierSpec, eps: float, r: float,
                          q: float, h) -> tuple[float, float]:
    """Shifted L^q mass of the mollified field against the contraction bound
    abs_mass^q times the same mass of the raw field."""
    from .quadrature import shift_integral
    u_eps = mollify(f, m, eps)
    lhs, _ = shift_integral(u_eps, None, h, q)
    raw, _ = shift_integral(f, None, h, q)
    return lhs, m.abs_mass ** q * raw
