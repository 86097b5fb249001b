"""Fidelity maximization over the ancillary squeezing, and sweep campaigns.

The optimizer is a deterministic coarse grid followed by golden-section
refinement of the bracket around the grid maximum.  Sweeps evaluate one row
per grid point, optionally nesting the optimizer, and record per-point errors
without aborting the campaign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegeneratePostselectionError
from .resources import ResourceState, SchemeConfig, scheme_state, theoretical_state
from .teleport import fidelity_closed_form

COARSE_POINTS = 41
BRACKET_TOL = 1e-4
_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepSpec:
    """One sweep campaign: a base configuration and the axis to scan."""

    base: SchemeConfig
    axis: str  # 's' | 'r' | 'loss' | 'T' | 'eta'
    grid: tuple[float, ...]
    detector: str = "ideal"
    optimize_s_at_each: bool = False

    def __post_init__(self):
        if self.axis not in ("s", "r", "loss", "T", "eta"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        g = tuple(float(v) for v in self.grid)
        if not g:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", g)
        for v in g:
            self.config_at(v)  # validates range via SchemeConfig

    def config_at(self, value: float) -> SchemeConfig:
        if self.axis == "s":
            return self.base.with_(s=value)
        if self.axis == "r":
            return self.base.with_(r=value)
        if self.axis == "loss":
            return self.base.with_(T_loss=1.0 - value)
        if self.axis == "T":
            return self.base.with_(T1=value, T2=value)
        return self.base.with_(eta3=value, eta4=value)


@dataclass(frozen=True)
class OptResult:
    s_star: float
    f_star: float
    trace: tuple[tuple[float, float], ...]
    bracket: tuple[float, float]
    plateau: bool = False
    multi_peak: bool = False


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       tol: float) -> tuple[float, float, tuple[float, float]]:
    """Deterministic golden-section maximization on [a, b] to bracket width tol.

    Returns (x_star, f(x_star), final bracket).
    """
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x_star = 0.5 * (a + b)
    return x_star, f(x_star), (a, b)


def _scheme_fidelity(cfg: SchemeConfig, detector: str) -> float:
    return fidelity_closed_form(scheme_state(cfg, detector))


def optimize_s(cfg: SchemeConfig, detector: str = "ideal",
               coarse_points: int = COARSE_POINTS,
               bracket_tol: float = BRACKET_TOL) -> OptResult:
    """Maximize the teleportation fidelity over the ancillary squeezing s in [0, r]."""
    if cfg.r == 0.0:
        f0 = _scheme_fidelity(cfg.with_(s=0.0), detector)
        return OptResult(0.0, f0, ((0.0, f0),), (0.0, 0.0), plateau=True)

    grid = np.linspace(0.0, cfg.r, coarse_points)
    trace: list[tuple[float, float]] = []

    def ev(s: float) -> float:
        f = _scheme_fidelity(cfg.with_(s=float(s)), detector)
        trace.append((float(s), f))
        return f

    values = np.array([ev(s) for s in grid])
    i_best = int(np.argmax(values))
    spread = float(values.max() - values.min())
    if spread < 1e-12:
        return OptResult(float(grid[0]), float(values[0]), tuple(trace),
                         (float(grid[0]), float(grid[0])), plateau=True)

    # unimodality on [0, r] is assumed by the bracketing step, not proven;
    # flag any coarse-grid evidence against it
    peaks = sum(1 for k in range(1, coarse_points - 1)
                if values[k] > values[k - 1] and values[k] > values[k + 1])
    edge_max = i_best in (0, coarse_points - 1)
    multi_peak = peaks > 1 or (peaks == 1 and edge_max)

    lo = float(grid[max(0, i_best - 1)])
    hi = float(grid[min(coarse_points - 1, i_best + 1)])
    s_star, f_star, bracket = golden_section_max(ev, lo, hi, bracket_tol)
    best_s, best_f = max(trace, key=lambda t: t[1])
    if best_f > f_star:
        s_star, f_star = best_s, best_f
    return OptResult(float(s_star), float(f_star), tuple(trace), bracket,
                     plateau=False, multi_peak=multi_peak)


def optimize_delta(r: float, bracket_tol: float = BRACKET_TOL) -> OptResult:
    """Maximize the fidelity of the analytic squeezed Bell family over its angle."""
    trace: list[tuple[float, float]] = []

    def ev(d: float) -> float:
        f = fidelity_closed_form(theoretical_state("squeezed-bell", r, float(d)))
        trace.append((float(d), f))
        return f

    d_star, f_star, bracket = golden_section_max(ev, 0.0, np.pi / 2.0, bracket_tol)
    best_d, best_f = max(trace, key=lambda t: t[1])
    if best_f > f_star:
        d_star, f_star = best_d, best_f
    return OptResult(float(d_star), float(f_star), tuple(trace), bracket)


@dataclass
class SweepRow:
    axis: str
    value: float
    fidelity: Optional[float] = None
    success_prob: Optional[float] = None
    s_star: Optional[float] = None
    error: Optional[str] = None


def _sweep_point(spec: SweepSpec, value: float) -> SweepRow:
    row = SweepRow(axis=spec.axis, value=float(value))
    try:
        cfg = spec.config_at(value)
        if spec.optimize_s_at_each:
            opt = optimize_s(cfg, spec.detector)
            cfg = cfg.with_(s=opt.s_star)
            row.s_star = opt.s_star
        state: ResourceState = scheme_state(cfg, spec.detector)
        row.fidelity = fidelity_closed_form(state)
        row.success_prob = state.success_prob
    except DegeneratePostselectionError as exc:
        row.error = f"degenerate-postselection: {exc}"
    except Exception as exc:  # recorded in-row, sweep continues
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every grid point of the spec; rows keep their grid order."""
    if jobs <= 1:
        return [_sweep_point(spec, v) for v in spec.grid]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda v: _sweep_point(spec, v), spec.grid))
