"""Parasitic toroid inductance and the scope-style low-pass filter.

Inductance formulas take centimetres and return millihenries, matching the
usual catalogue form L = 0.4*pi*mu*N^2*(A/l)*1e-5 mH. Use :func:`mh_to_henry`
before handing a value to the simulator.
"""

from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.signal import lfilter, lfilter_zi


@dataclasses.dataclass(frozen=True)
class CoreGeometry:
    outer_D: float
    """Outer diameter [cm]"""
    inner_d: float
    """Inner diameter [cm]"""
    height_h: float
    """Core height [cm]"""
    permeability_mu: float = 1.0
    """Relative permeability [-]"""
    turns_N: int = 1

    def __post_init__(self) -> None:
        if not (self.outer_D > self.inner_d > 0):
            raise ValueError(f"need outer_D > inner_d > 0, got D={self.outer_D!r}, d={self.inner_d!r}")
        if not self.height_h > 0:
            raise ValueError(f"height_h must be positive, got {self.height_h!r}")
        if not self.permeability_mu >= 0:
            raise ValueError(f"permeability_mu must be non-negative, got {self.permeability_mu!r}")
        if int(self.turns_N) != self.turns_N or self.turns_N < 1:
            raise ValueError(f"turns_N must be an integer >= 1, got {self.turns_N!r}")

    @property
    def cross_section_cm2(self) -> float:
        return (self.outer_D - self.inner_d) / 2 * self.height_h

    @property
    def path_length_cm(self) -> float:
        return math.pi * (self.outer_D + self.inner_d) / 2

    @property
    def path_length_m(self) -> float:
        return self.path_length_cm * 1e-2

    def scaled(self, s: float) -> "CoreGeometry":
        return dataclasses.replace(self, outer_D=s * self.outer_D, inner_d=s * self.inner_d, height_h=s * self.height_h)


@dataclasses.dataclass(frozen=True)
class FilterSpec:
    cutoff_fc: float
    """-3 dB frequency [Hz]"""
    order: int = 1

    def __post_init__(self) -> None:
        if not self.cutoff_fc > 0:
            raise ValueError(f"cutoff_fc must be positive, got {self.cutoff_fc!r}")
        if self.order != 1:
            raise ValueError(f"only first-order filters are supported, got order={self.order!r}")


def inductance(geom: CoreGeometry) -> float:
    """Toroid inductance [mH] from geometry in cm."""
    mu, n = geom.permeability_mu, geom.turns_N
    return 0.4 * math.pi * mu * n**2 * (geom.cross_section_cm2 / geom.path_length_cm) * 1e-5


class ScaledInductance(NamedTuple):
    substituted_mH: float
    """D=2h, d=h put through the full geometric formula (pi cancels)"""
    printed_mH: float
    """Closed form 0.4*pi*mu*N^2*(h/3)*1e-5 as printed; exactly pi times larger"""


def inductance_scaled(mu: float, N: int, h: float) -> ScaledInductance:
    """Inductance of a core with the fixed aspect ratio D = 2d = 2h.

    Both numbers are returned because the published closed form keeps a
    factor pi that cancels when the aspect ratio is substituted into the
    geometric formula.
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    substituted = inductance(CoreGeometry(outer_D=2 * h, inner_d=h, height_h=h, permeability_mu=mu, turns_N=N))
    printed = 0.4 * math.pi * mu * N**2 * (h / 3) * 1e-5
    return ScaledInductance(substituted, printed)


def scaling_study(mu: float, N: int, h_min: float, h_max: float, points: int) -> list[tuple[float, float, float]]:
    """Rows (h_cm, L_eq1_mH, L_eq2_printed_mH) on a log grid of heights."""
    if not (0 < h_min <= h_max):
        raise ValueError(f"need 0 < h_min <= h_max, got {h_min!r}, {h_max!r}")
    if points < 1:
        raise ValueError(f"points must be >= 1, got {points!r}")
    hs = np.geomspace(h_min, h_max, points) if points > 1 else np.array([h_min])
    return [(float(h), *inductance_scaled(mu, N, float(h))) for h in hs]


def mh_to_henry(L_mH: float) -> float:
    return L_mH * 1e-3


def lowpass(v: npt.ArrayLike, dt: float, f: FilterSpec) -> np.ndarray:
    """First-order IIR low-pass, y[n] = y[n-1] + a*(x[n] - y[n-1]).

    a = dt / (dt + 1/(2*pi*fc)), seeded with y[0] = x[0]; DC gain is 1.
    """
    x = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("lowpass needs a 1-D signal with at least 2 samples")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    a = dt / (dt + 1.0 / (2 * math.pi * f.cutoff_fc))
    b_coef, a_coef = [a], [1.0, -(1.0 - a)]
    y, _ = lfilter(b_coef, a_coef, x, zi=lfilter_zi(b_coef, a_coef) * x[0])
    return y
