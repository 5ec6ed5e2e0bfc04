"""Ideal-memristor criteria on sampled phi-q curves, plus fingerprint tests.

Chua asks the constitutive curve to be nonlinear, continuously
differentiable and monotonically increasing; Georgiou tightens the last to
strictly increasing. On sampled data each property becomes a surrogate with
an explicit tolerance:

* nonlinear: worst residual of the least-squares affine fit, relative to the
  phi range, exceeds ``tol``;
* C1: no adjacent secant-slope jump exceeds 10x the local median jump
  (plus a ``tol * max slope`` floor so straight lines do not trip on rounding);
* monotone: every slope >= -tol * max slope;
* strict: every slope > +tol * max slope.

When the samples carry analytic slopes (curves generated from the device
model) those are used for the two monotonicity tests instead of secants.
Analytic slopes carry no rounding noise, so for them strict means every
slope > 0: a sech^2 tail of 1e-26 is flat to a secant but still positive.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Optional, Sequence

import numpy as np

from . import core
from .core import DevicePhysics
from .sim import SimConfig, SimulationError, extract_loop, lobe_area, simulate, values_at_zero, whole_periods
from .waveforms import Sinusoid

MIN_POINTS = 32
KINK_FACTOR = 10.0
KINK_WINDOW = 5


@dataclasses.dataclass(frozen=True)
class ConstitutiveSamples:
    q: np.ndarray
    phi: np.ndarray
    slope: Optional[np.ndarray] = None
    """Analytic dphi/dq at each q, when known"""

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if q.ndim != 1 or q.shape != phi.shape:
            raise ValueError("q and phi must be 1-D arrays of equal length")
        if q.size < MIN_POINTS:
            raise ValueError(f"need at least {MIN_POINTS} samples, got {q.size}")
        if np.any(np.diff(q) <= 0):
            raise ValueError("q must be strictly increasing")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "phi", phi)
        if self.slope is not None:
            slope = np.asarray(self.slope, dtype=float)
            if slope.shape != q.shape:
                raise ValueError("slope must match q in shape")
            object.__setattr__(self, "slope", slope)

    @classmethod
    def from_device(cls, dev: DevicePhysics, q_span: float = 5.0, points: int = 256) -> "ConstitutiveSamples":
        """Model curve over q in [-q_span*S_w, q_span*S_w], centred on the zero of m."""
        q = np.linspace(-q_span, q_span, points) * dev.switching_Sw - dev.charge_shift
        return cls(q, core.flux(dev, q), core.memristance(dev, q))


@dataclasses.dataclass(frozen=True)
class CriteriaReport:
    nonlinear: bool
    c1: bool
    monotone: bool
    strict: bool
    metrics: dict

    @property
    def chua(self) -> bool:
        return self.nonlinear and self.c1 and self.monotone

    @property
    def georgiou(self) -> bool:
        return self.nonlinear and self.c1 and self.strict

    def to_dict(self) -> dict:
        return {
            "nonlinear": self.nonlinear,
            "c1": self.c1,
            "monotone": self.monotone,
            "strict": self.strict,
            "chua": self.chua,
            "georgiou": self.georgiou,
            "metrics": dict(self.metrics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def table(self) -> str:
        m = self.metrics
        rows = [
            ("nonlinear", self.nonlinear, f"affine residual {m['affine_residual']:.3e}"),
            ("continuously differentiable", self.c1, f"kink metric {m['kink_metric']:.3f}"),
            ("monotonically increasing", self.monotone, f"min slope/max {m['min_slope_ratio']:.3e}"),
            ("strictly increasing", self.strict, f"min slope/max {m['min_slope_ratio']:.3e}"),
            ("Chua (all three)", self.chua, ""),
            ("Georgiou (all three)", self.georgiou, ""),
        ]
        width = max(len(r[0]) for r in rows)
        lines = [f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {note}".rstrip() for name, ok, note in rows]
        return "\n".join(lines) + "\n"


def _kink_metric(secants: np.ndarray, floor: float) -> float:
    jumps = np.abs(np.diff(secants))
    if jumps.size == 0:
        return 0.0
    worst = 0.0
    for k in range(jumps.size):
        lo, hi = max(0, k - KINK_WINDOW), min(jumps.size, k + KINK_WINDOW + 1)
        neighbours = np.concatenate([jumps[lo:k], jumps[k + 1 : hi]])
        local = float(np.median(neighbours)) if neighbours.size else 0.0
        worst = max(worst, float(jumps[k] / (local + floor)))
    return worst


def check_criteria(s: ConstitutiveSamples, tol: float = 1e-6) -> CriteriaReport:
    if not tol >= 0:
        raise ValueError(f"tol must be non-negative, got {tol!r}")
    q, phi = s.q, s.phi
    phi_range = float(np.ptp(phi))
    design = np.column_stack([q, np.ones_like(q)])
    coef, *_ = np.linalg.lstsq(design, phi, rcond=None)
    residual = float(np.max(np.abs(phi - design @ coef)))
    affine_residual = residual / phi_range if phi_range > 0 else 0.0

    secants = np.diff(phi) / np.diff(q)
    slopes = s.slope if s.slope is not None else secants
    scale = float(np.max(np.abs(slopes)))
    if scale == 0:
        scale = 1.0
    min_ratio = float(np.min(slopes)) / scale
    kink = _kink_metric(secants, tol * float(np.max(np.abs(secants))) + np.finfo(float).tiny)

    return CriteriaReport(
        nonlinear=affine_residual > tol,
        c1=bool(kink < KINK_FACTOR),
        monotone=min_ratio >= -tol,
        strict=min_ratio > (0.0 if s.slope is not None else tol),
        metrics={
            "affine_residual": affine_residual,
            "kink_metric": kink,
            "min_slope_ratio": min_ratio,
            "tol": tol,
            "points": int(q.size),
            "analytic_slopes": s.slope is not None,
        },
    )


@dataclasses.dataclass(frozen=True)
class PinchedResult:
    passed: bool
    worst_offset: float
    """Largest |v_total| at an i = 0 crossing [V]"""
    crossings: int


def fingerprint_pinched(trace, tol_V: float) -> PinchedResult:
    """Does the v-i curve go through the origin?

    Checks |v_total| at every i = 0 crossing of the settled loop, i.e. after
    the first period, so filter start-up does not count.
    """
    if whole_periods(trace) < 2:
        raise SimulationError("pinch fingerprint needs a sinusoid-driven trace covering at least 2 periods")
    v = values_at_zero(*extract_loop(trace, "i", "v_total"))
    if v.size == 0:
        raise SimulationError("no current zero crossings found")
    worst = float(np.max(np.abs(v)))
    return PinchedResult(worst < tol_V, worst, int(v.size))


@dataclasses.dataclass(frozen=True)
class LobeDecayResult:
    passed: bool
    omegas: tuple
    areas: tuple

    @property
    def ratio(self) -> float:
        """Last area over first."""
        return self.areas[-1] / self.areas[0]


def fingerprint_lobe_decay(
    dev: DevicePhysics,
    I0: float,
    omegas: Sequence[float],
    cfg: Optional[SimConfig] = None,
    periods: int = 4,
) -> LobeDecayResult:
    """v-i lobe area at each drive frequency; passes iff strictly decreasing.

    Each frequency runs ``periods`` whole periods from t = 0 at the default
    10^4 steps. ``cfg`` only contributes its LPF setting and must have L = 0.
    """
    omegas = [float(w) for w in omegas]
    if len(omegas) < 3:
        raise ValueError(f"lobe decay needs at least 3 frequencies, got {len(omegas)}")
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        raise ValueError("omegas must be strictly ascending")
    if cfg is not None and cfg.parasitic_L != 0:
        raise ValueError("lobe decay is a pure-device fingerprint; parasitic_L must be 0")
    lpf = cfg.lpf if cfg is not None else None
    areas = []
    for omega in omegas:
        w = Sinusoid(I0, omega)
        run = SimConfig(0.0, periods * w.period, lpf=lpf)
        areas.append(lobe_area(extract_loop(simulate(dev, w, run), "i", "v_total")))
    passed = all(b < a for a, b in zip(areas, areas[1:]))
    return LobeDecayResult(passed, tuple(omegas), tuple(areas))


def lobe_decay_omegas(omega0: float, count: int = 5) -> list[float]:
    """omega0 doubled repeatedly: [w0, 2w0, 4w0, ...]."""
    return [omega0 * 2**k for k in range(count)]


def default_lobe_omega(dev: DevicePhysics, I0: float) -> float:
    """Base frequency putting the charge swing I0/omega at 2.5 S_w."""
    return I0 / (2.5 * dev.switching_Sw)
