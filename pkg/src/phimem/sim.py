"""Fixed-step transient simulation of one Phi memristor in series with its parasitic L.

The device has no state beyond the delivered charge, so a run samples i(t) and
q(t) on a uniform grid and evaluates the constitutive law pointwise. The
parasitic voltage L*di/dt comes from central differences on the sampled
current, which is what a sampling scope would see at step edges.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np

from . import core
from .core import DevicePhysics
from .parasitics import CoreGeometry, FilterSpec, lowpass
from .waveforms import DriveWaveform, Sinusoid, Step, Tabulated, field_from_current

COLUMNS = ("t", "i", "q", "H", "m", "phi", "v_mem", "v_L", "v_total")
DEFAULT_STEPS = 10_000
DEFAULT_RISE_FRACTION = 0.01
EDGE_TOL = 1e-6  # fraction of dt within which a sample counts as sitting on a waveform edge
ZERO_TOL = 1e-12  # fraction of max |x| below which a sample counts as an exact zero


class SimulationError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class SimConfig:
    t_start: float
    t_end: float
    dt: Optional[float] = None
    """Fixed step [s]; None means (t_end - t_start)/10^4"""
    parasitic_L: float = 0.0
    """Series inductance [H]"""
    lpf: Optional[FilterSpec] = None
    step_rise_time: Optional[float] = None
    """Ramp applied to Step drives [s]; None means 1% of the run"""

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end must exceed t_start, got [{self.t_start!r}, {self.t_end!r}]")
        if self.dt is not None:
            if not self.dt > 0:
                raise ValueError(f"dt must be positive, got {self.dt!r}")
            if self.dt > self.duration / 10 * (1 + 1e-12):
                raise ValueError(f"dt must be at most (t_end - t_start)/10, got {self.dt!r}")
        if not self.parasitic_L >= 0:
            raise ValueError(f"parasitic_L must be non-negative, got {self.parasitic_L!r}")
        if self.step_rise_time is not None and not self.step_rise_time >= 0:
            raise ValueError(f"step_rise_time must be non-negative, got {self.step_rise_time!r}")

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else self.duration / DEFAULT_STEPS

    @property
    def rise_time(self) -> float:
        return self.step_rise_time if self.step_rise_time is not None else DEFAULT_RISE_FRACTION * self.duration

    def grid(self) -> np.ndarray:
        n_exact = self.duration / self.step
        n = round(n_exact)
        if abs(n - n_exact) > 1e-9 * max(n_exact, 1.0):
            n = math.floor(n_exact)
            return self.t_start + self.step * np.arange(n + 1)
        return np.linspace(self.t_start, self.t_end, n + 1)


def default_geometry() -> CoreGeometry:
    return CoreGeometry(outer_D=2.0, inner_d=1.0, height_h=1.0, permeability_mu=1000.0, turns_N=1)


@dataclasses.dataclass(frozen=True)
class SimTrace:
    t: np.ndarray
    i: np.ndarray
    q: np.ndarray
    H: np.ndarray
    m: np.ndarray
    phi: np.ndarray
    v_mem: np.ndarray
    v_L: np.ndarray
    v_total: np.ndarray
    device: DevicePhysics
    waveform: DriveWaveform
    config: SimConfig

    def __post_init__(self) -> None:
        for name in COLUMNS:
            getattr(self, name).setflags(write=False)

    @property
    def dt(self) -> float:
        return self.config.step

    def __len__(self) -> int:
        return self.t.size

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMNS:
            raise KeyError(f"unknown trace column {name!r}; expected one of {', '.join(COLUMNS)}")
        return getattr(self, name)

    def table(self) -> np.ndarray:
        return np.column_stack([self.column(c) for c in COLUMNS])

    def to_csv(self, path: Union[str, Path]) -> None:
        write_csv(path, COLUMNS, self.table())


def write_csv(path: Union[str, Path], header, rows) -> None:
    """Deterministic CSV: fixed header, ``%.17g`` numbers, ``\\n`` line ends."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["%.17g" % float(v) for v in row])


def _sample_current(w: DriveWaveform, t: np.ndarray) -> np.ndarray:
    """Sample i(t); a sample sitting on a jump takes the mean of both limits.

    At the ends of the window the one-sided limit facing into the window is
    used instead. This keeps the trapezoid rule second order across jumps.
    """
    i = np.array(w.current(t), dtype=float)
    dt = t[1] - t[0]
    for bp in w.breakpoints():
        k = int(round((bp - t[0]) / dt))
        if not 0 <= k < t.size or abs(t[k] - bp) > EDGE_TOL * dt:
            continue
        left = float(w.current_left(np.array(bp)))
        right = float(w.current(np.array(bp)))
        if k == 0:
            i[k] = right
        elif k == t.size - 1:
            i[k] = left
        else:
            i[k] = 0.5 * (left + right)
    return i


def simulate(dev: DevicePhysics, w: DriveWaveform, cfg: SimConfig, geom: Optional[CoreGeometry] = None) -> SimTrace:
    """Run ``w`` through the device on the fixed grid of ``cfg``."""
    geom = geom or default_geometry()
    if isinstance(w, Step):
        w = dataclasses.replace(w, rise_time=cfg.rise_time)
    if isinstance(w, Tabulated):
        lo, hi = w.span
        slack = 1e-9 * cfg.duration
        if cfg.t_start < lo - slack or cfg.t_end > hi + slack:
            raise SimulationError(
                f"tabulated waveform covers [{lo:g}, {hi:g}] s but the run needs [{cfg.t_start:g}, {cfg.t_end:g}] s"
            )
    t = cfg.grid()
    i = _sample_current(w, t)
    q = np.asarray(w.charge(t), dtype=float)
    v_mem = core.memristance(dev, q) * i
    v_L = cfg.parasitic_L * np.gradient(i, t)
    v_total = v_mem + v_L
    if cfg.lpf is not None:
        v_total = lowpass(v_total, cfg.step, cfg.lpf)
    return SimTrace(
        t=t,
        i=i,
        q=q,
        H=field_from_current(i, geom.path_length_m, geom.turns_N),
        m=core.magnetization(dev, q),
        phi=core.flux(dev, q),
        v_mem=v_mem,
        v_L=v_L,
        v_total=v_total,
        device=dev,
        waveform=w,
        config=cfg,
    )


class Loop(NamedTuple):
    x: np.ndarray
    y: np.ndarray


def whole_periods(trace: SimTrace) -> int:
    if not isinstance(trace.waveform, Sinusoid):
        raise SimulationError("period trimming needs a sinusoidal drive")
    span = trace.t[-1] - trace.t[0]
    return math.floor(span / trace.waveform.period + 1e-9)


def extract_loop(trace: SimTrace, x: str, y: str) -> Loop:
    """Parametric curve (x(t), y(t)).

    For sinusoidal drives the first period is dropped as lead-in and the
    curve is cut to the remaining whole periods; other drives return the
    whole run.
    """
    if len(trace) == 0:
        raise SimulationError("empty trace")
    xs, ys = trace.column(x), trace.column(y)
    if not isinstance(trace.waveform, Sinusoid):
        return Loop(xs.copy(), ys.copy())
    n = whole_periods(trace)
    if n < 2:
        raise SimulationError(f"loop extraction needs at least 2 full drive periods, trace has {n}")
    period = trace.waveform.period
    a = trace.t[0] + period
    b = trace.t[0] + n * period
    tol = EDGE_TOL * trace.dt
    keep = (trace.t >= a - tol) & (trace.t <= b + tol)
    return Loop(xs[keep].copy(), ys[keep].copy())


class Crossing(NamedTuple):
    index: int
    """Sample just before (or at) the crossing"""
    frac: float
    """Position between sample ``index`` and ``index + 1``, in [0, 1)"""


def zero_crossings(x: np.ndarray) -> list[Crossing]:
    """Sign changes of ``x``.

    Samples with |x| at rounding level are exact zeros and are reported
    directly; other crossings are located by linear interpolation.
    """
    x = np.asarray(x, dtype=float)
    scale = np.max(np.abs(x)) if x.size else 0.0
    if scale == 0:
        return []
    sign = np.sign(np.where(np.abs(x) <= ZERO_TOL * scale, 0.0, x))
    out: list[Crossing] = []
    last_sign, last_idx = 0.0, -1
    k = 0
    while k < x.size:
        if sign[k] == 0:
            j = k
            while j + 1 < x.size and sign[j + 1] == 0:
                j += 1
            before = sign[k - 1] if k > 0 else 0.0
            after = sign[j + 1] if j + 1 < x.size else 0.0
            # a run of zeros at either end of the record is still a crossing
            if before == 0 or after == 0 or before != after:
                out.append(Crossing(k, 0.0))
            last_sign, last_idx = 0.0, j
            k = j + 1
            continue
        if last_sign != 0 and sign[k] != last_sign and last_idx == k - 1:
            a = last_idx
            out.append(Crossing(a, float(x[a] / (x[a] - x[k]))))
        last_sign, last_idx = sign[k], k
        k += 1
    return out


def values_at_zero(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """y interpolated at every zero crossing of x."""
    y = np.asarray(y, dtype=float)
    vals = []
    for c in zero_crossings(x):
        if c.frac == 0.0:
            vals.append(y[c.index])
        else:
            vals.append(y[c.index] + c.frac * (y[c.index + 1] - y[c.index]))
    return np.array(vals)


def _shoelace(x: np.ndarray, y: np.ndarray) -> float:
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def lobe_areas(loop) -> list[float]:
    """Absolute area of each lobe of a closed curve.

    Lobes are delimited by the sign changes of x, so a curve pinched at
    x = 0 (a memristor v-i figure eight) yields one area per lobe instead of
    the near-zero net signed area of the whole figure.
    """
    x, y = (np.asarray(a, dtype=float) for a in loop)
    if x.size < 3:
        raise SimulationError("a loop needs at least 3 points")
    extent = max(np.ptp(x), np.ptp(y))
    if extent == 0:
        raise SimulationError("degenerate loop: all points coincide")
    if math.hypot(x[-1] - x[0], y[-1] - y[0]) > 1e-2 * extent:
        raise SimulationError("loop is not closed: first and last points differ")
    if x[-1] != x[0] or y[-1] != y[0]:
        x, y = np.append(x, x[0]), np.append(y, y[0])

    px, py, cuts = [], [], []
    crossings = {c.index: c for c in zero_crossings(x)}
    for k in range(x.size):
        c = crossings.get(k)
        if c is not None and c.frac == 0.0:
            cuts.append(len(px))
        px.append(x[k])
        py.append(y[k])
        if c is not None and c.frac > 0.0:
            cuts.append(len(px))
            px.append(0.0)
            py.append(y[k] + c.frac * (y[k + 1] - y[k]))
    px_a, py_a = np.array(px), np.array(py)
    if len(cuts) < 2:
        return [abs(_shoelace(px_a, py_a))]
    areas = []
    for a, b in zip(cuts, cuts[1:]):
        areas.append(abs(_shoelace(px_a[a : b + 1], py_a[a : b + 1])))
    wrap = np.r_[cuts[-1] : px_a.size, 0 : cuts[0] + 1]
    areas.append(abs(_shoelace(px_a[wrap], py_a[wrap])))
    return areas


def lobe_area(loop) -> float:
    """Total enclosed area of a closed curve, summed lobe by lobe (x*y units)."""
    return math.fsum(lobe_areas(loop))


def flux_delta(trace: SimTrace) -> float:
    """Flux change as the trapezoid time-integral of v_mem [Wb]."""
    return float(np.trapezoid(trace.v_mem, trace.t))


def state_flux_delta(trace: SimTrace) -> float:
    """Flux change read off the constitutive curve, phi(q_end) - phi(q_start) [Wb]."""
    return float(core.flux(trace.device, trace.q[-1]) - core.flux(trace.device, trace.q[0]))


class RateIndependenceReport(NamedTuple):
    charge_A: float
    charge_B: float
    delta_phi_A: float
    delta_phi_B: float
    delta_phi_state: float
    difference: float
    """|delta_phi_A - delta_phi_B| from the integrated voltages [Wb]"""


def rate_independence_check(
    dev: DevicePhysics,
    pulseA: DriveWaveform,
    pulseB: DriveWaveform,
    cfg: SimConfig,
    geom: Optional[CoreGeometry] = None,
) -> RateIndependenceReport:
    """Simulate two drives of equal net charge and compare their integrated flux change."""
    ta, tb = simulate(dev, pulseA, cfg, geom), simulate(dev, pulseB, cfg, geom)
    qa, qb = ta.q[-1] - ta.q[0], tb.q[-1] - tb.q[0]
    if abs(qa - qb) > 1e-9 * max(abs(qa), abs(qb)):
        raise SimulationError(f"drives deliver unequal charge: A={qa:.17g} C, B={qb:.17g} C")
    da, db = flux_delta(ta), flux_delta(tb)
    return RateIndependenceReport(float(qa), float(qb), da, db, state_flux_delta(ta), abs(da - db))


class Peak(NamedTuple):
    t: float
    value: float


def find_peak(trace: SimTrace, column: str = "v_mem") -> Peak:
    """Largest sample of ``column``, refined by a parabola through its neighbours."""
    y = trace.column(column)
    k = int(np.argmax(y))
    if k == 0 or k == y.size - 1:
        return Peak(float(trace.t[k]), float(y[k]))
    ym, y0, yp = y[k - 1], y[k], y[k + 1]
    denom = ym - 2 * y0 + yp
    if denom == 0:
        return Peak(float(trace.t[k]), float(y0))
    off = 0.5 * (ym - yp) / denom
    dt = trace.t[k + 1] - trace.t[k]
    return Peak(float(trace.t[k] + off * dt), float(y0 - 0.25 * (ym - yp) * off))
