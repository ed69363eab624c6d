"""Test functions u: R^N -> R^d, their regions, and ground-truth jump data.

Fields are immutable; evaluation is pure and vectorized over points of
shape (M, N).  Three kinds are supported: piecewise-constant over a
whitelisted geometry set (intervals/boxes, balls, finite disjoint unions),
smooth closed forms, and grid samples that extend by zero outside the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import CapabilityError, InputError

__all__ = [
    "RegionSpec",
    "GridSpec",
    "Field",
    "JumpPatch",
    "JumpSetSpec",
    "eval_field",
    "truncate",
    "jump_set_of",
    "sample",
    "make_field",
    "default_region",
    "support_bbox",
    "knots_1d",
    "unit_ball_volume",
]


def unit_ball_volume(n: int) -> float:
    """Lebesgue measure of the unit ball in R^n (n = 1, 2, 3)."""
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    if n == 3:
        return 4.0 * math.pi / 3.0
    raise CapabilityError(f"unsupported dimension {n}")


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionSpec:
    """A subset of R^N from the closed-form geometry whitelist.

    kinds and parameters:
      box        -- lo, hi (componentwise, lo < hi); 1D boxes are intervals
      ball       -- center, radius
      half_space -- normal, offset; membership is x . normal <= offset
      complement -- inner (another RegionSpec)
      union      -- parts (tuple of RegionSpec)
    """

    kind: str
    lo: tuple = ()
    hi: tuple = ()
    center: tuple = ()
    radius: float = 0.0
    normal: tuple = ()
    offset: float = 0.0
    inner: Optional["RegionSpec"] = None
    parts: tuple = ()

    @staticmethod
    def box(lo, hi) -> "RegionSpec":
        lo = tuple(float(v) for v in np.atleast_1d(lo))
        hi = tuple(float(v) for v in np.atleast_1d(hi))
        if len(lo) != len(hi) or any(a >= b for a, b in zip(lo, hi)):
            raise InputError(f"degenerate box {lo}..{hi}")
        return RegionSpec("box", lo=lo, hi=hi)

    @staticmethod
    def interval(a: float, b: float) -> "RegionSpec":
        return RegionSpec.box([a], [b])

    @staticmethod
    def ball(center, radius: float) -> "RegionSpec":
        if radius <= 0:
            raise InputError("ball radius must be positive")
        return RegionSpec("ball", center=tuple(float(v) for v in np.atleast_1d(center)),
                          radius=float(radius))

    @staticmethod
    def half_space(normal, offset: float) -> "RegionSpec":
        n = np.atleast_1d(np.asarray(normal, dtype=float))
        if not np.all(np.isfinite(n)) or np.linalg.norm(n) == 0:
            raise InputError("half-space normal must be a nonzero finite vector")
        return RegionSpec("half_space", normal=tuple(n), offset=float(offset))

    @staticmethod
    def complement_of(inner: "RegionSpec") -> "RegionSpec":
        return RegionSpec("complement", inner=inner)

    @staticmethod
    def union_of(*parts: "RegionSpec") -> "RegionSpec":
        if not parts:
            raise InputError("union needs at least one part")
        return RegionSpec("union", parts=tuple(parts))

    @property
    def dim(self) -> int:
        if self.kind == "box":
            return len(self.lo)
        if self.kind == "ball":
            return len(self.center)
        if self.kind == "half_space":
            return len(self.normal)
        if self.kind == "complement":
            return self.inner.dim
        return self.parts[0].dim

    def contains(self, x: np.ndarray) -> np.ndarray:
        """Exact membership test for points of shape (M, N) -> bool (M,).

        Boxes and half-spaces are closed; balls are closed.  The test uses
        exact comparisons, no floating fuzz.
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "box":
            lo = np.asarray(self.lo)
            hi = np.asarray(self.hi)
            return np.all((x >= lo) & (x <= hi), axis=-1)
        if self.kind == "ball":
            c = np.asarray(self.center)
            return np.sum((x - c) ** 2, axis=-1) <= self.radius ** 2
        if self.kind == "half_space":
            return x @ np.asarray(self.normal) <= self.offset
        if self.kind == "complement":
            return ~self.inner.contains(x)
        out = self.parts[0].contains(x)
        for p in self.parts[1:]:
            out = out | p.contains(x)
        return out

    def bbox(self):
        """Bounding box (lo, hi) as arrays, or None when unbounded."""
        if self.kind == "box":
            return np.asarray(self.lo), np.asarray(self.hi)
        if self.kind == "ball":
            c = np.asarray(self.center)
            return c - self.radius, c + self.radius
        if self.kind in ("half_space", "complement"):
            return None
        boxes = [p.bbox() for p in self.parts]
        if any(b is None for b in boxes):
            return None
        los = np.min([b[0] for b in boxes], axis=0)
        his = np.max([b[1] for b in boxes], axis=0)
        return los, his

    def measure(self) -> float:
        """Lebesgue measure; CapabilityError for unbounded regions."""
        if self.kind == "box":
            return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))
        if self.kind == "ball":
            return unit_ball_volume(self.dim) * self.radius ** self.dim
        if self.kind == "union":
            return sum(p.measure() for p in self.parts)
        raise CapabilityError(f"no closed-form measure for region kind {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "box":
            return {"kind": "box", "lo": list(self.lo), "hi": list(self.hi)}
        if self.kind == "ball":
            return {"kind": "ball", "center": list(self.center), "radius": self.radius}
        if self.kind == "half_space":
            return {"kind": "half_space", "normal": list(self.normal), "offset": self.offset}
        if self.kind == "complement":
            return {"kind": "complement", "inner": self.inner.to_dict()}
        return {"kind": "union", "parts": [p.to_dict() for p in self.parts]}

    @staticmethod
    def from_dict(d: dict) -> "RegionSpec":
        kind = d.get("kind")
        if kind == "box":
            return RegionSpec.box(d["lo"], d["hi"])
        if kind == "ball":
            return RegionSpec.ball(d["center"], d["radius"])
        if kind == "half_space":
            return RegionSpec.half_space(d["normal"], d["offset"])
        if kind == "complement":
            return RegionSpec.complement_of(RegionSpec.from_dict(d["inner"]))
        if kind == "union":
            return RegionSpec.union_of(*(RegionSpec.from_dict(p) for p in d["parts"]))
        raise InputError(f"unknown region kind {kind!r}")


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Regular grid: cells per axis, samples live at cell centers."""

    origin: tuple
    spacing: tuple
    extent: tuple

    def __post_init__(self):
        if any(s <= 0 for s in self.spacing):
            raise InputError("grid spacing must be positive")
        if any(e < 2 for e in self.extent):
            raise InputError("grid extent must be at least 2 cells per axis")

    @property
    def dim(self) -> int:
        return len(self.origin)

    def centers(self):
        """1D arrays of cell-center coordinates per axis."""
        return [np.asarray(self.origin[k]) + (np.arange(self.extent[k]) + 0.5) * self.spacing[k]
                for k in range(self.dim)]

    def center_points(self) -> np.ndarray:
        axes = self.centers()
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """A function u: R^N -> R^d.

    kind "piecewise": payload["pieces"] is a tuple of (RegionSpec, amplitude)
    with pairwise disjoint regions; the value is the amplitude of the region
    containing x, zero outside every region.
    kind "smooth": payload["formula"] names a closed form, payload["params"]
    holds its parameters (payload may carry a private callable).
    kind "grid": payload holds a GridSpec and a value array; evaluation is
    multilinear interpolation over cell centers, zero outside the grid.
    """

    dim_in: int
    dim_out: int
    kind: str
    payload: dict = field(repr=False)
    support_radius: float
    name: str = ""

    def __call__(self, x):
        return eval_field(self, x)


def _as_points(f: Field, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InputError("non-finite evaluation point")
    single = False
    if x.ndim == 0:
        if f.dim_in != 1:
            raise InputError("scalar point for a multi-dimensional field")
        x = x.reshape(1, 1)
        single = True
    elif x.ndim == 1:
        if x.shape[0] == f.dim_in:
            x = x.reshape(1, f.dim_in)
            single = True
        elif f.dim_in == 1:
            x = x.reshape(-1, 1)
        else:
            raise InputError(f"point shape {x.shape} does not match dim_in={f.dim_in}")
    if x.shape[-1] != f.dim_in:
        raise InputError(f"point shape {x.shape} does not match dim_in={f.dim_in}")
    return x, single


def _grid_eval(spec: GridSpec, values: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Multilinear interpolation over cell centers with a zero ring outside."""
    n = spec.dim
    d = values.shape[-1]
    u = (x - np.asarray(spec.origin)) / np.asarray(spec.spacing) - 0.5
    i0 = np.floor(u).astype(np.int64)
    w = u - i0
    out = np.zeros((x.shape[0], d))
    extent = np.asarray(spec.extent)
    for corner in range(1 << n):
        bits = np.array([(corner >> k) & 1 for k in range(n)])
        idx = i0 + bits
        weight = np.ones(x.shape[0])
        for k in range(n):
            weight = weight * (w[:, k] if bits[k] else 1.0 - w[:, k])
        inside = np.all((idx >= 0) & (idx < extent), axis=1)
        if not np.any(inside):
            continue
        sel = tuple(idx[inside, k] for k in range(n))
        out[inside] += weight[inside, None] * values[sel]
    return out


def eval_field(f: Field, x) -> np.ndarray:
    """Evaluate u(x); vectorized over points of shape (M, N)."""
    pts, single = _as_points(f, x)
    if f.kind == "piecewise":
        out = np.zeros((pts.shape[0], f.dim_out))
        for region, amp in f.payload["pieces"]:
            mask = region.contains(pts)
            out[mask] = np.asarray(amp, dtype=float)
    elif f.kind == "smooth":
        out = _eval_smooth(f, pts)
    elif f.kind == "grid":
        out = _grid_eval(f.payload["spec"], f.payload["values"], pts)
    else:
        raise InputError(f"unknown field kind {f.kind!r}")
    return out[0] if single else out


def _eval_smooth(f: Field, pts: np.ndarray) -> np.ndarray:
    formula = f.payload["formula"]
    p = f.payload.get("params", {})
    m = pts.shape[0]
    if formula == "constant":
        return np.broadcast_to(np.asarray(p["value"], dtype=float), (m, f.dim_out)).copy()
    if formula == "gaussian_bump":
        c = np.asarray(p["center"], dtype=float)
        w = float(p["width"])
        amp = np.asarray(p["amplitude"], dtype=float)
        r2 = np.sum((pts - c) ** 2, axis=-1)
        return np.exp(-r2 / (2.0 * w * w))[:, None] * amp
    if formula == "steps_cdf":
        # closed-form mollification of a 1D step sum: sum_j amp_j *
        # (H((x-a_j)/eps) - H((x-b_j)/eps)) with H the mollifier CDF
        cdf: Callable = f.payload["cdf"]
        eps = float(p["eps"])
        xs = pts[:, 0]
        out = np.zeros((m, f.dim_out))
        for a, b, amp in p["steps"]:
            out += (cdf((xs - a) / eps) - cdf((xs - b) / eps))[:, None] * np.asarray(amp)
        return out
    if formula == "callable_1d":
        return f.payload["call"](pts[:, 0])
    raise InputError(f"unknown smooth formula {formula!r}")


# ---------------------------------------------------------------------------
# Jump data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JumpPatch:
    """One interface patch of a jump set.

    geometry: "point" (1D), "segment" (2D), "circle" (2D),
              "rect" (3D box face), "sphere" (3D).
    For flat patches `normal` is the constant unit normal; for circles and
    spheres it is outward along the patch and `normal` stores None.
    """

    geometry: str
    params: dict
    trace_plus: np.ndarray
    trace_minus: np.ndarray
    normal: Optional[np.ndarray]
    measure: float

    @property
    def jump_size(self) -> float:
        return float(np.linalg.norm(self.trace_plus - self.trace_minus))


@dataclass(frozen=True)
class JumpSetSpec:
    patches: tuple

    def total_measure(self) -> float:
        return sum(p.measure for p in self.patches)


def _pieces_1d_breaks(pieces):
    """Sorted breakpoints and per-open-interval values for 1D piecewise fields."""
    bps = set()
    for region, _ in pieces:
        for r in (region.parts if region.kind == "union" else (region,)):
            if r.kind != "box":
                raise CapabilityError("1D jump extraction needs interval regions")
            bps.add(r.lo[0])
            bps.add(r.hi[0])
    return np.array(sorted(bps))


def jump_set_of(f: Field) -> JumpSetSpec:
    """Extract the ground-truth jump set of a piecewise-constant field."""
    if f.kind == "smooth" and f.payload.get("formula") == "constant":
        return JumpSetSpec(patches=())
    if f.kind != "piecewise":
        raise InputError("jump_set_of requires a piecewise-constant field")
    pieces = f.payload["pieces"]
    if f.dim_in == 1:
        return _jump_set_1d(f, pieces)
    return _jump_set_nd(f, pieces)


def _jump_set_1d(f: Field, pieces) -> JumpSetSpec:
    bps = _pieces_1d_breaks(pieces)
    patches = []
    for b in bps:
        # open-interval values adjacent to the breakpoint; adjacent regions
        # from the whitelist have positive length so a small probe is exact
        gap = min(np.diff(bps).min() if len(bps) > 1 else 1.0, 1.0) / 4.0
        left = eval_field(f, np.array([[b - gap]]))[0]
        right = eval_field(f, np.array([[b + gap]]))[0]
        if np.array_equal(left, right):
            continue
        patches.append(JumpPatch(
            geometry="point", params={"location": np.array([b])},
            trace_plus=right, trace_minus=left,
            normal=np.array([1.0]), measure=1.0))
    return JumpSetSpec(patches=tuple(patches))


def _jump_set_nd(f: Field, pieces) -> JumpSetSpec:
    # closures must be pairwise disjoint so traces are amplitude vs background
    boxes = []
    for region, _ in pieces:
        bb = region.bbox()
        if bb is None:
            raise CapabilityError("jump extraction needs bounded regions")
        boxes.append(bb)
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            lo = np.maximum(boxes[i][0], boxes[j][0])
            hi = np.minimum(boxes[i][1], boxes[j][1])
            if np.all(lo < hi):
                raise CapabilityError("adjacent pieces are not supported in 2D/3D")
    patches = []
    zero = np.zeros(f.dim_out)
    for region, amp in pieces:
        amp = np.asarray(amp, dtype=float)
        if np.array_equal(amp, zero):
            continue
        patches.extend(_region_boundary_patches(region, amp, zero, f.dim_in))
    return JumpSetSpec(patches=tuple(patches))


def _region_boundary_patches(region: RegionSpec, inside, outside, n: int):
    if region.kind == "union":
        out = []
        for p in region.parts:
            out.extend(_region_boundary_patches(p, inside, outside, n))
        return out
    if region.kind == "ball":
        c = np.asarray(region.center)
        r = region.radius
        if n == 2:
            return [JumpPatch("circle", {"center": c, "radius": r},
                              trace_plus=np.asarray(outside), trace_minus=np.asarray(inside),
                              normal=None, measure=2.0 * math.pi * r)]
        if n == 3:
            return [JumpPatch("sphere", {"center": c, "radius": r},
                              trace_plus=np.asarray(outside), trace_minus=np.asarray(inside),
                              normal=None, measure=4.0 * math.pi * r * r)]
        raise CapabilityError("ball boundary patches only in 2D/3D")
    if region.kind == "box":
        lo = np.asarray(region.lo)
        hi = np.asarray(region.hi)
        side = hi - lo
        out = []
        for axis in range(n):
            for sign, coord in ((-1.0, lo[axis]), (1.0, hi[axis])):
                normal = np.zeros(n)
                normal[axis] = sign
                area = float(np.prod(np.delete(side, axis)))
                center = (lo + hi) / 2.0
                center[axis] = coord
                geometry = "segment" if n == 2 else "rect"
                params = {"center": center, "axis": axis,
                          "half_extents": np.delete(side, axis) / 2.0}
                out.append(JumpPatch(geometry, params,
                                     trace_plus=np.asarray(outside),
                                     trace_minus=np.asarray(inside),
                                     normal=normal, measure=area))
        return out
    raise CapabilityError(f"jump extraction unsupported for region kind {region.kind!r}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def truncate(f: Field, l: float) -> Field:
    """Componentwise clamp of the field to [-l, l]."""
    if l < 0:
        raise InputError("truncation level must be nonnegative")
    if f.kind == "piecewise":
        pieces = tuple((region, np.clip(np.asarray(amp, dtype=float), -l, l))
                       for region, amp in f.payload["pieces"])
        return replace(f, payload={"pieces": pieces}, name=f"{f.name}|trunc{l:g}")
    if f.kind == "grid":
        payload = dict(f.payload)
        payload["values"] = np.clip(f.payload["values"], -l, l)
        return replace(f, payload=payload, name=f"{f.name}|trunc{l:g}")
    if f.kind == "smooth" and f.payload.get("formula") == "constant":
        value = np.clip(np.asarray(f.payload["params"]["value"], dtype=float), -l, l)
        payload = {"formula": "constant", "params": {"value": value}}
        return replace(f, payload=payload, name=f"{f.name}|trunc{l:g}")
    # no closed form under clamping: fall back to a grid sample
    lo, hi = support_bbox(f)
    margin = 0.05 * float(np.max(hi - lo))
    lo, hi = lo - margin, hi + margin
    cells = 512 if f.dim_in == 1 else 256
    spacing = (hi - lo) / cells
    g = GridSpec(origin=tuple(lo), spacing=tuple(spacing), extent=(cells,) * f.dim_in)
    sampled = sample(f, g)
    return truncate(sampled, l)


def sample(f: Field, g: GridSpec) -> Field:
    """Sample a field at cell centers onto a grid field."""
    if g.dim != f.dim_in:
        raise InputError("grid dimension does not match field")
    pts = g.center_points()
    vals = eval_field(f, pts).reshape(tuple(g.extent) + (f.dim_out,))
    payload = {"spec": g, "values": vals, "source": f.name}
    return Field(dim_in=f.dim_in, dim_out=f.dim_out, kind="grid", payload=payload,
                 support_radius=f.support_radius, name=f"{f.name}|grid")


def support_bbox(f: Field):
    """Axis-aligned box containing the support (declared radius fallback)."""
    if f.kind == "piecewise":
        boxes = [region.bbox() for region, _ in f.payload["pieces"]]
        if all(b is not None for b in boxes):
            lo = np.min([b[0] for b in boxes], axis=0)
            hi = np.max([b[1] for b in boxes], axis=0)
            return lo, hi
    if f.kind == "grid":
        spec = f.payload["spec"]
        lo = np.asarray(spec.origin)
        hi = lo + np.asarray(spec.spacing) * np.asarray(spec.extent)
        return lo, hi
    if f.kind == "smooth" and f.payload.get("formula") == "steps_cdf":
        p = f.payload["params"]
        lo = min(s[0] for s in p["steps"]) - p["eps"] * f.payload["cdf_halfwidth"]
        hi = max(s[1] for s in p["steps"]) + p["eps"] * f.payload["cdf_halfwidth"]
        return np.array([lo]), np.array([hi])
    r = f.support_radius
    return -r * np.ones(f.dim_in), r * np.ones(f.dim_in)


def default_region(f: Field, margin: float = 1.0) -> RegionSpec:
    """Box strictly containing the support with the given margin."""
    lo, hi = support_bbox(f)
    return RegionSpec.box(lo - margin, hi + margin)


def knots_1d(f: Field):
    """Breakpoints where a 1D field loses smoothness, or None if smooth."""
    if f.dim_in != 1:
        return None
    if f.kind == "piecewise":
        return _pieces_1d_breaks(f.payload["pieces"])
    if f.kind == "smooth" and f.payload.get("formula") == "steps_cdf":
        p = f.payload["params"]
        w = f.payload["cdf_halfwidth"]
        eps = p["eps"]
        ks = []
        for a, b, _ in p["steps"]:
            ks.extend((a - w * eps, a + w * eps, b - w * eps, b + w * eps))
        return np.array(sorted(set(ks)))
    if f.kind == "grid":
        spec = f.payload["spec"]
        return np.asarray(spec.centers()[0])
    return None


def scale_field(f: Field, lam: float) -> Field:
    """The field lam * u, preserving kind."""
    if f.kind == "piecewise":
        pieces = tuple((region, lam * np.asarray(amp, dtype=float))
                       for region, amp in f.payload["pieces"])
        return replace(f, payload={"pieces": pieces}, name=f"{lam:g}*{f.name}")
    if f.kind == "grid":
        payload = dict(f.payload)
        payload["values"] = lam * f.payload["values"]
        return replace(f, payload=payload, name=f"{lam:g}*{f.name}")
    if f.kind == "smooth":
        formula = f.payload["formula"]
        params = dict(f.payload.get("params", {}))
        if formula == "constant":
            params["value"] = lam * np.asarray(params["value"], dtype=float)
        elif formula == "gaussian_bump":
            params["amplitude"] = lam * np.asarray(params["amplitude"], dtype=float)
        elif formula == "steps_cdf":
            params["steps"] = tuple((a, b, lam * np.asarray(amp, dtype=float))
                                    for a, b, amp in params["steps"])
        else:
            raise CapabilityError(f"cannot scale smooth formula {formula!r}")
        payload = dict(f.payload)
        payload["params"] = params
        return replace(f, payload=payload, name=f"{lam:g}*{f.name}")
    raise CapabilityError(f"cannot scale field kind {f.kind!r}")


def sup_amplitude(f: Field) -> float:
    """Componentwise sup |u^i|; used to decide when truncation is inactive."""
    if f.kind == "piecewise":
        amps = [np.max(np.abs(np.asarray(a))) for _, a in f.payload["pieces"]]
        return float(max(amps, default=0.0))
    if f.kind == "grid":
        return float(np.max(np.abs(f.payload["values"])))
    if f.kind == "smooth":
        p = f.payload.get("params", {})
        if f.payload["formula"] == "constant":
            return float(np.max(np.abs(np.asarray(p["value"]))))
        if f.payload["formula"] == "gaussian_bump":
            return float(np.max(np.abs(np.asarray(p["amplitude"]))))
    raise CapabilityError(f"no amplitude bound for field {f.name!r}")


# ---------------------------------------------------------------------------
# Shipped field library
# ---------------------------------------------------------------------------

def make_field(name: str, **params) -> Field:
    """Construct one of the named test fields used by experiments."""
    if name == "step_1d":
        amp = float(params.get("amplitude", 1.0))
        a = float(params.get("a", 0.0))
        b = float(params.get("b", 1.0))
        pieces = ((RegionSpec.interval(a, b), np.array([amp])),)
        return Field(1, 1, "piecewise", {"pieces": pieces},
                     support_radius=max(abs(a), abs(b)), name=name)
    if name == "two_steps_1d":
        a1 = float(params.get("amp1", 1.0))
        a2 = float(params.get("amp2", -2.0))
        pieces = ((RegionSpec.interval(0.0, 1.0), np.array([a1])),
                  (RegionSpec.interval(1.5, 2.0), np.array([a2])))
        return Field(1, 1, "piecewise", {"pieces": pieces}, support_radius=2.0, name=name)
    if name == "vector_step_1d":
        # two-component rotated step, exercises the euclidean |.| on values
        angle = float(params.get("angle", math.pi / 3.0))
        amp = float(params.get("amplitude", 1.0))
        vec = amp * np.array([math.cos(angle), math.sin(angle)])
        pieces = ((RegionSpec.interval(0.0, 1.0), vec),)
        return Field(1, 2, "piecewise", {"pieces": pieces}, support_radius=1.0, name=name)
    if name == "disk_2d":
        radius = float(params.get("radius", 0.5))
        amp = float(params.get("amplitude", 1.0))
        center = params.get("center", (0.0, 0.0))
        pieces = ((RegionSpec.ball(center, radius), np.array([amp])),)
        rad = float(np.linalg.norm(center)) + radius
        return Field(2, 1, "piecewise", {"pieces": pieces}, support_radius=rad, name=name)
    if name == "box_2d":
        lo = params.get("lo", (-0.5, -0.5))
        hi = params.get("hi", (0.5, 0.5))
        amp = float(params.get("amplitude", 1.0))
        pieces = ((RegionSpec.box(lo, hi), np.array([amp])),)
        rad = float(np.max(np.abs(np.array([lo, hi]))))
        return Field(2, 1, "piecewise", {"pieces": pieces}, support_radius=rad, name=name)
    if name == "ball_3d":
        radius = float(params.get("radius", 0.5))
        amp = float(params.get("amplitude", 1.0))
        pieces = ((RegionSpec.ball((0.0, 0.0, 0.0), radius), np.array([amp])),)
        return Field(3, 1, "piecewise", {"pieces": pieces}, support_radius=radius, name=name)
    if name == "gaussian_bump_1d":
        width = float(params.get("width", 0.35))
        amp = float(params.get("amplitude", 1.0))
        center = params.get("center", (0.5,))
        payload = {"formula": "gaussian_bump",
                   "params": {"center": center, "width": width, "amplitude": np.array([amp])}}
        rad = abs(float(np.atleast_1d(center)[0])) + 9.0 * width
        return Field(1, 1, "smooth", payload, support_radius=rad, name=name)
    if name == "constant":
        value = np.atleast_1d(np.asarray(params.get("value", 1.0), dtype=float))
        dim = int(params.get("dim", 1))
        payload = {"formula": "constant", "params": {"value": value}}
        return Field(dim, len(value), "smooth", payload,
                     support_radius=float(params.get("support_radius", 1.0)), name=name)
    raise InputError(f"unknown field name {name!r}")
