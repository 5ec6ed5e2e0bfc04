"""Constitutive relations of the Phi memristor.

The device maps delivered charge ``q`` to normalized core magnetization
through a single tanh law,

    m(q) = tanh(q / S_w + atanh(m0))

from which the flux linkage ``phi = mu0 * S * M_s * m`` and the memristance
``M(q) = dphi/dq`` follow. A separate two-branch model
``m = tanh(A * (H -/+ H_c))`` is kept for side-by-side m-H plots.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import numpy.typing as npt

MU0 = 4e-7 * math.pi  # Vacuum permeability [henry/meter]
M0_GUARD = 1e-12  # |m0| must stay this far from saturation

ArrayLike = npt.ArrayLike


@dataclasses.dataclass(frozen=True)
class DevicePhysics:
    cross_section_S: float
    """Core cross-sectional area [m^2]"""
    saturation_Ms: float
    """Saturation magnetization [A/m]"""
    switching_Sw: float
    """Switching coefficient [C]"""
    initial_m0: float = 0.0
    """Initial normalized magnetization, open interval (-1, 1)"""
    coercive_Hc: float = 0.0
    """Coercive field [A/m]; documentation only, the tanh law does not use it"""
    mu0: float = MU0

    def __post_init__(self) -> None:
        for name in ("cross_section_S", "saturation_Ms", "switching_Sw"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not abs(self.initial_m0) <= 1.0 - M0_GUARD:
            raise ValueError(f"initial_m0 must lie strictly inside (-1, 1), got {self.initial_m0!r}")
        if not self.coercive_Hc >= 0:
            raise ValueError(f"coercive_Hc must be non-negative, got {self.coercive_Hc!r}")

    @property
    def flux_scale(self) -> float:
        """Saturation flux linkage mu0*S*M_s [Wb]."""
        return self.mu0 * self.cross_section_S * self.saturation_Ms

    @property
    def peak_memristance(self) -> float:
        """Largest attainable memristance mu0*S*M_s/S_w [ohm]."""
        return self.flux_scale / self.switching_Sw

    @property
    def charge_shift(self) -> float:
        """Charge offset S_w*atanh(m0) that the initial state adds to q [C]."""
        return self.switching_Sw * math.atanh(self.initial_m0)


@dataclasses.dataclass(frozen=True)
class EditorsLoopParams:
    slope_A: float
    """tanh slope [(A/m)^-1]"""
    coercive_Hc: float
    """Coercive field [A/m]"""

    def __post_init__(self) -> None:
        if not self.slope_A > 0:
            raise ValueError(f"slope_A must be positive, got {self.slope_A!r}")
        if not self.coercive_Hc > 0:
            raise ValueError(f"coercive_Hc must be positive, got {self.coercive_Hc!r}")


def sech2(x: ArrayLike) -> np.ndarray:
    """sech^2 without overflow, accurate in the tails.

    Written as 4 e^{-2|x|} / (1 + e^{-2|x|})^2 so it stays strictly positive
    until e^{-2|x|} underflows (|x| > ~372), unlike 1 - tanh^2 which rounds
    to zero beyond |x| ~ 19.
    """
    e = np.exp(-2.0 * np.abs(np.asarray(x, dtype=float)))
    return 4.0 * e / (1.0 + e) ** 2


def _argument(dev: DevicePhysics, q: ArrayLike) -> np.ndarray:
    return np.asarray(q, dtype=float) / dev.switching_Sw + math.atanh(dev.initial_m0)


def magnetization(dev: DevicePhysics, q: ArrayLike) -> np.ndarray:
    """Normalized magnetization m(q) = tanh(q/S_w + atanh(m0))."""
    return np.tanh(_argument(dev, q))


def flux(dev: DevicePhysics, q: ArrayLike) -> np.ndarray:
    """Flux linkage mu0*S*M_s*m(q) [Wb], gauge fixed so that m = 0 gives phi = 0."""
    return dev.flux_scale * magnetization(dev, q)


def memristance(dev: DevicePhysics, q: ArrayLike) -> np.ndarray:
    """M(q) = dphi/dq = (mu0*S*M_s/S_w) * sech^2(q/S_w + atanh(m0)) [ohm]."""
    return dev.peak_memristance * sech2(_argument(dev, q))


def editors_loop(p: EditorsLoopParams, H_samples: ArrayLike, direction: str) -> np.ndarray:
    """One branch of m = tanh(A*(H -/+ H_c)).

    ``direction`` is ``"ascending"`` (field rising, branch shifted to +H_c) or
    ``"descending"`` (field falling, shifted to -H_c). The sweep must be
    monotone in that direction.
    """
    H = np.atleast_1d(np.asarray(H_samples, dtype=float))
    if H.size == 0:
        raise ValueError("editors_loop needs at least one field sample")
    steps = np.diff(H)
    if direction == "ascending":
        if np.any(steps < 0):
            raise ValueError("ascending sweep must be non-decreasing in H")
        return np.tanh(p.slope_A * (H - p.coercive_Hc))
    if direction == "descending":
        if np.any(steps > 0):
            raise ValueError("descending sweep must be non-increasing in H")
        return np.tanh(p.slope_A * (H + p.coercive_Hc))
    raise ValueError(f"direction must be 'ascending' or 'descending', got {direction!r}")


def editors_full_loop(p: EditorsLoopParams, H_max: float, points: int = 201) -> tuple[np.ndarray, np.ndarray]:
    """Closed (H, m) loop: ascending from -H_max to H_max, then back down."""
    up = np.linspace(-H_max, H_max, points)
    down = up[::-1]
    H = np.concatenate([up, down, up[:1]])
    m = np.concatenate([editors_loop(p, up, "ascending"), editors_loop(p, down, "descending"), editors_loop(p, up[:1], "ascending")])
    return H, m


def default_device() -> DevicePhysics:
    """Desk-scale ferrite toroid (D=2 cm, d=1 cm, h=1 cm) parked near negative remanence."""
    return DevicePhysics(
        cross_section_S=5e-5,
        saturation_Ms=3.8e5,
        switching_Sw=1e-6,
        initial_m0=-0.98,
        coercive_Hc=20.0,
    )
