"""Current-source drives i(t) and their charge integrals q(t).

Every waveform answers ``current(t)`` and ``charge(t)`` on scalars or arrays.
Charges are closed form for Step, Sinusoid and PulseTrain; Tabulated uses the
exact integral of its piecewise-linear interpolant (the trapezoid rule).
"""

from __future__ import annotations

import csv
import dataclasses
import math
from pathlib import Path
from typing import Union

import numpy as np
import numpy.typing as npt


@dataclasses.dataclass(frozen=True)
class Step:
    amplitude_I: float
    start_t: float = 0.0
    rise_time: float = 0.0
    """Linear ramp duration [s]; 0 gives an ideal step"""

    def __post_init__(self) -> None:
        if not self.rise_time >= 0:
            raise ValueError(f"rise_time must be non-negative, got {self.rise_time!r}")

    def current(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.rise_time == 0:
            return np.where(t >= self.start_t, self.amplitude_I, 0.0)
        return self.amplitude_I * np.clip((t - self.start_t) / self.rise_time, 0.0, 1.0)

    def current_left(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.rise_time == 0:
            return np.where(t > self.start_t, self.amplitude_I, 0.0)
        return self.current(t)

    def charge(self, t: npt.ArrayLike) -> np.ndarray:
        tau = np.maximum(np.asarray(t, dtype=float) - self.start_t, 0.0)
        if self.rise_time == 0:
            return self.amplitude_I * tau
        r = self.rise_time
        return self.amplitude_I * np.where(tau < r, tau**2 / (2 * r), tau - r / 2)

    def breakpoints(self) -> list[float]:
        return [self.start_t] if self.rise_time == 0 else []


@dataclasses.dataclass(frozen=True)
class Sinusoid:
    amplitude_I0: float
    omega: float
    phase: float = 0.0
    charge_offset: float = 0.0
    """Additive constant on q [C]; 0 keeps the zero-mean convention q = -(I0/w) cos(wt)"""

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def current(self, t: npt.ArrayLike) -> np.ndarray:
        return self.amplitude_I0 * np.sin(self.omega * np.asarray(t, dtype=float) + self.phase)

    current_left = current

    def charge(self, t: npt.ArrayLike) -> np.ndarray:
        theta = self.omega * np.asarray(t, dtype=float) + self.phase
        return -(self.amplitude_I0 / self.omega) * np.cos(theta) + self.charge_offset

    def breakpoints(self) -> list[float]:
        return []


@dataclasses.dataclass(frozen=True)
class Pulse:
    start_t: float
    duration: float
    amplitude: float

    @property
    def end_t(self) -> float:
        return self.start_t + self.duration


@dataclasses.dataclass(frozen=True)
class PulseTrain:
    pulses: tuple[Pulse, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))
        for p in self.pulses:
            if not p.duration > 0:
                raise ValueError(f"pulse duration must be positive, got {p.duration!r}")
        for a, b in zip(self.pulses, self.pulses[1:]):
            if b.start_t < a.end_t:
                raise ValueError(f"pulses must be time-ordered and non-overlapping: {a} then {b}")

    @property
    def total_charge(self) -> float:
        return math.fsum(p.amplitude * p.duration for p in self.pulses)

    def current(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p in self.pulses:
            out = np.where((t >= p.start_t) & (t < p.end_t), p.amplitude, out)
        return out

    def current_left(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p in self.pulses:
            out = np.where((t > p.start_t) & (t <= p.end_t), p.amplitude, out)
        return out

    def charge(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p in self.pulses:
            out = out + p.amplitude * np.clip(t - p.start_t, 0.0, p.duration)
        return out

    def breakpoints(self) -> list[float]:
        points = []
        for p in self.pulses:
            points += [p.start_t, p.end_t]
        return points


@dataclasses.dataclass(frozen=True)
class Tabulated:
    times: np.ndarray
    currents: np.ndarray
    charge_offset: float = 0.0
    """Charge already delivered at times[0] [C]"""

    def __post_init__(self) -> None:
        if not math.isfinite(self.charge_offset):
            raise ValueError(f"charge_offset must be finite, got {self.charge_offset!r}")
        t = np.asarray(self.times, dtype=float)
        i = np.asarray(self.currents, dtype=float)
        if t.ndim != 1 or t.shape != i.shape:
            raise ValueError("tabulated times and currents must be 1-D arrays of equal length")
        if t.size < 2:
            raise ValueError("tabulated waveform needs at least 2 samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("tabulated times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "currents", i)
        knots = np.concatenate([[0.0], np.cumsum(np.diff(t) * (i[1:] + i[:-1]) / 2)])
        object.__setattr__(self, "_knot_charge", knots)

    @classmethod
    def from_samples(cls, samples, charge_offset: float = 0.0) -> "Tabulated":
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("tabulated samples must be (t, i) pairs")
        return cls(arr[:, 0], arr[:, 1], charge_offset)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Tabulated":
        """Load (t, i) from a CSV with a one-line header.

        Columns named ``t`` and ``i`` are used when present (so simulation
        traces load directly), otherwise the first two columns. A ``q``
        column, if any, supplies the starting charge.
        """
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        if len(rows) < 3:
            raise ValueError(f"{path}: need a header and at least 2 data rows")
        header = [h.strip() for h in rows[0]]
        it, ii = (header.index("t"), header.index("i")) if {"t", "i"} <= set(header) else (0, 1)
        data = np.array([[float(r[it]), float(r[ii])] for r in rows[1:] if r], dtype=float)
        q0 = float(rows[1][header.index("q")]) if "q" in header else 0.0
        return cls(data[:, 0], data[:, 1], q0)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def _checked(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        lo, hi = self.span
        slack = 1e-9 * (hi - lo)
        if np.any(t < lo - slack) or np.any(t > hi + slack):
            raise ValueError(f"time outside tabulated range [{lo:g}, {hi:g}]")
        return np.clip(t, lo, hi)

    def current(self, t: npt.ArrayLike) -> np.ndarray:
        return np.interp(self._checked(t), self.times, self.currents)

    current_left = current

    def charge(self, t: npt.ArrayLike) -> np.ndarray:
        t = self._checked(t)
        k = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        i_t = np.interp(t, self.times, self.currents)
        return self.charge_offset + self._knot_charge[k] + (t - self.times[k]) * (self.currents[k] + i_t) / 2

    def breakpoints(self) -> list[float]:
        return []


DriveWaveform = Union[Step, Sinusoid, PulseTrain, Tabulated]


def current_at(w: DriveWaveform, t: npt.ArrayLike) -> np.ndarray:
    return w.current(t)


def charge_at(w: DriveWaveform, t: npt.ArrayLike) -> np.ndarray:
    """Charge delivered by ``w`` up to ``t``.

    Sinusoids follow the zero-mean convention q = -(I0/w) cos(wt + phase), so
    q(0) is -I0/w, not 0.
    """
    return w.charge(t)


def field_from_current(i: npt.ArrayLike, path_length_l: float, turns_N: float = 1) -> np.ndarray:
    """Toroid field H = N*i/l [A/m] (Ampere's law, l in metres)."""
    if not path_length_l > 0:
        raise ValueError(f"path_length_l must be positive, got {path_length_l!r}")
    if not turns_N >= 1:
        raise ValueError(f"turns_N must be at least 1, got {turns_N!r}")
    return turns_N * np.asarray(i, dtype=float) / path_length_l
