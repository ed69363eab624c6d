"""Epsilon sweeps, tail statistics, limit extrapolation, and chain verdicts.

Tail minima/maxima are window statistics over the smallest-eps rows, never
claimed to be true liminf/limsup values.  Three extrapolation models are
supported: a weighted constant tail, an affine fit against 1/|ln eps| (the
controlling small parameter of the mollified-seminorm sweeps), and an affine
fit against eps^s.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BesovLabError, FitError, InputError, SweepError

__all__ = [
    "EpsilonGrid",
    "SweepRow",
    "Extrapolation",
    "EpsilonSweepResult",
    "ChainVerdict",
    "epsilon_sweep",
    "extrapolate",
    "chain_check",
]


@dataclass(frozen=True)
class EpsilonGrid:
    eps0: float
    ratio: float
    count: int

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise InputError("ratio must lie in (0, 1)")
        if self.count < 4:
            raise InputError("sweep needs at least 4 points")
        if self.eps0 <= 0.0:
            raise InputError("eps0 must be positive")

    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.count)


@dataclass(frozen=True)
class SweepRow:
    eps: float
    value: float
    error: float
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class Extrapolation:
    model: str
    limit: float
    uncertainty: float


@dataclass(frozen=True)
class EpsilonSweepResult:
    functional_id: str
    rows: tuple
    tail_window: int
    tail_min: float
    tail_max: float
    extrapolated: Extrapolation

    def valid_rows(self):
        return [r for r in self.rows if r.ok]


def _eval_row(functional: Callable, eps: float) -> SweepRow:
    try:
        out = functional(eps)
    except BesovLabError as exc:
        return SweepRow(eps=eps, value=math.nan, error=math.nan, ok=False,
                        note=f"{type(exc).__name__}: {exc}")
    if hasattr(out, "value"):
        return SweepRow(eps=eps, value=float(out.value),
                        error=float(out.error_estimate), ok=True)
    if isinstance(out, tuple):
        return SweepRow(eps=eps, value=float(out[0]), error=float(out[1]), ok=True)
    return SweepRow(eps=eps, value=float(out), error=0.0, ok=True)


def epsilon_sweep(functional: Callable, grid: EpsilonGrid,
                  model: str = "constant-tail", power_s: float = 1.0,
                  tail_window: Optional[int] = None, threads: int = 1,
                  functional_id: str = "") -> EpsilonSweepResult:
    """Evaluate functional(eps) on a geometric grid (eps strictly decreasing)
    and extrapolate the eps -> 0 limit.

    Rows that raise a package error are flagged and skipped by the tail
    statistics; if every row fails the sweep fails.  Rows are mapped in grid
    order regardless of thread count, so outputs are thread-invariant.
    """
    eps_values = grid.values()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda e: _eval_row(functional, float(e)), eps_values))
    else:
        rows = [_eval_row(functional, float(e)) for e in eps_values]
    valid = [r for r in rows if r.ok]
    if not valid:
        raise SweepError(f"every row of sweep {functional_id!r} failed")
    window = tail_window if tail_window is not None else math.ceil(grid.count / 3)
    window = min(window, len(valid))
    tail = valid[-window:]
    tail_min = min(r.value for r in tail)
    tail_max = max(r.value for r in tail)
    result = EpsilonSweepResult(functional_id=functional_id, rows=tuple(rows),
                                tail_window=window, tail_min=tail_min,
                                tail_max=tail_max,
                                extrapolated=Extrapolation(model, math.nan, math.nan))
    ext = extrapolate(result, model, power_s=power_s)
    return EpsilonSweepResult(functional_id=functional_id, rows=tuple(rows),
                              tail_window=window, tail_min=tail_min,
                              tail_max=tail_max, extrapolated=ext)


def _affine_fit(x: np.ndarray, y: np.ndarray):
    """Least squares y ~ a + b x; returns (a, sigma_a)."""
    design = np.stack([np.ones_like(x), x], axis=-1)
    if np.linalg.matrix_rank(design) < 2:
        raise FitError("degenerate extrapolation design (identical abscissae)")
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = max(len(x) - 2, 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(design.T @ design)
    return float(coef[0]), math.sqrt(max(cov[0, 0], 0.0))


def extrapolate(sweep: EpsilonSweepResult, model: str,
                power_s: float = 1.0) -> Extrapolation:
    valid = sweep.valid_rows()
    tail = valid[-sweep.tail_window:]
    if model == "constant-tail":
        if not tail:
            raise FitError("constant-tail extrapolation needs valid rows")
        w = np.array([1.0 / (r.error ** 2 + 1e-300) for r in tail])
        v = np.array([r.value for r in tail])
        limit = float(w @ v / np.sum(w))
        spread = max(r.value for r in tail) - min(r.value for r in tail)
        uncertainty = spread + float(np.mean([r.error for r in tail]))
        return Extrapolation(model, limit, uncertainty)
    # affine models fit the tail rows (at least 3): the model only holds
    # asymptotically, and the largest-eps rows bias the intercept
    fit_rows = valid[-max(sweep.tail_window, 3):]
    if len(fit_rows) < 3:
        raise FitError("extrapolation needs at least 3 valid tail rows")
    v = np.array([r.value for r in fit_rows])
    err_mean = float(np.mean([r.error for r in fit_rows]))
    if model == "affine-in-inverse-log":
        x = np.array([1.0 / abs(math.log(r.eps)) for r in fit_rows])
    elif model == "affine-in-power":
        x = np.array([r.eps ** power_s for r in fit_rows])
    else:
        raise InputError(f"unknown extrapolation model {model!r}")
    limit, sigma = _affine_fit(x, v)
    return Extrapolation(model if model != "affine-in-power"
                         else f"affine-in-power({power_s:g})",
                         limit, sigma + err_mean)


# ---------------------------------------------------------------------------
# Chain verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainVerdict:
    chain_id: str
    terms: dict
    tolerance: float
    passed: bool
    worst_violation: float

    def to_dict(self) -> dict:
        return {"chain": self.chain_id, "terms": dict(self.terms),
                "tolerance": self.tolerance, "pass": self.passed,
                "worst_violation": self.worst_violation}


def chain_check(kind: str, inputs: dict, tolerance: float) -> ChainVerdict:
    """Verdict for one of the limit chains.

    sandwich            -- needs lower, mid, upper; violation is how far mid
                           escapes [lower, upper].
    kernel-equivalence  -- all named terms must agree pairwise.
    jump-chain          -- same as kernel-equivalence (callers add the
                           jump-variation term).
    The tolerance is absolute; experiment runners convert relative
    tolerances using the chain's reference scale.
    """
    if tolerance < 0.0:
        raise InputError("tolerance must be nonnegative")
    if kind == "sandwich":
        missing = {"lower", "mid", "upper"} - set(inputs)
        if missing:
            raise InputError(f"sandwich verdict missing terms {sorted(missing)}")
        lower, mid, upper = inputs["lower"], inputs["mid"], inputs["upper"]
        worst = max(0.0, lower - mid, mid - upper)
        terms = {"lower": lower, "mid": mid, "upper": upper}
    elif kind in ("kernel-equivalence", "jump-chain"):
        if len(inputs) < 2:
            raise InputError("equivalence verdict needs at least two terms")
        vals = list(inputs.values())
        worst = max(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:])
        terms = dict(inputs)
    else:
        raise InputError(f"unknown chain kind {kind!r}")
    return ChainVerdict(chain_id=kind, terms={k: float(v) for k, v in terms.items()},
                        tolerance=float(tolerance), passed=bool(worst <= tolerance),
                        worst_violation=float(worst))
