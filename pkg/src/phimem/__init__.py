"""Phi memristor: tanh flux-charge model, transient simulation, parasitics and ideality checks."""

__version__ = "0.1.0"

from .core import (
    DevicePhysics,
    EditorsLoopParams,
    default_device,
    editors_loop,
    flux,
    magnetization,
    memristance,
)
from .criteria import ConstitutiveSamples, CriteriaReport, check_criteria, fingerprint_lobe_decay, fingerprint_pinched
from .parasitics import CoreGeometry, FilterSpec, inductance, inductance_scaled, lowpass
from .sim import (
    SimConfig,
    SimTrace,
    SimulationError,
    extract_loop,
    flux_delta,
    lobe_area,
    rate_independence_check,
    simulate,
)
from .waveforms import Pulse, PulseTrain, Sinusoid, Step, Tabulated, charge_at, current_at, field_from_current

__all__ = [
    "CoreGeometry",
    "ConstitutiveSamples",
    "CriteriaReport",
    "DevicePhysics",
    "EditorsLoopParams",
    "FilterSpec",
    "Pulse",
    "PulseTrain",
    "SimConfig",
    "SimTrace",
    "SimulationError",
    "Sinusoid",
    "Step",
    "Tabulated",
    "charge_at",
    "check_criteria",
    "current_at",
    "default_device",
    "editors_loop",
    "extract_loop",
    "field_from_current",
    "fingerprint_lobe_decay",
    "fingerprint_pinched",
    "flux",
    "flux_delta",
    "inductance",
    "inductance_scaled",
    "lobe_area",
    "lowpass",
    "magnetization",
    "memristance",
    "rate_independence_check",
    "simulate",
]
