"""Scenario files: one JSON document with the units spelled out in every key.

Example::

    {
      "device": {"cross_section_S_m2": 5e-5, "saturation_Ms_A_per_m": 3.8e5,
                 "switching_Sw_C": 1e-6, "initial_m0": 0.0},
      "waveform": {"type": "sinusoid", "amplitude_I0_A": 0.1, "omega_rad_s": 5e4},
      "sim": {"t_start_s": 0, "t_end_s": 5.026548245743669e-4, "parasitic_L_H": 0},
      "outputs": [{"kind": "loop_csv", "x": "H", "y": "m", "file": "loop_m_H.csv"}]
    }

``"device": "default"`` selects :func:`phimem.core.default_device`; a missing
``geometry`` selects the 2/1/1 cm ferrite toroid. Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .core import DevicePhysics, EditorsLoopParams, default_device
from .parasitics import CoreGeometry, FilterSpec, inductance, mh_to_henry
from .sim import COLUMNS, SimConfig, default_geometry
from .waveforms import DriveWaveform, Pulse, PulseTrain, Sinusoid, Step, Tabulated

OUTPUT_KINDS = ("trace_csv", "loop_csv", "loop_svg", "criteria_json", "scaling_csv", "editors_loop_csv")


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclasses.dataclass(frozen=True)
class OutputRequest:
    kind: str
    file: str
    x: Optional[str] = None
    y: Optional[str] = None
    h_min_cm: float = 1e-7
    h_max_cm: float = 1.0
    points: int = 8


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    device: DevicePhysics
    waveform: DriveWaveform
    sim: SimConfig
    geometry: CoreGeometry
    outputs: tuple[OutputRequest, ...]
    editors_loop: Optional[EditorsLoopParams] = None


class _Section:
    """Dict reader that remembers where it is, for error messages naming the field."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise ConfigError(path, "expected an object")
        self.data, self.path, self.used = data, path, set()

    def field(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def get(self, key: str, default: Any = ..., kind: type = float) -> Any:
        self.used.add(key)
        if key not in self.data:
            if default is ...:
                raise ConfigError(self.field(key), "required field is missing")
            return default
        value = self.data[key]
        if value is None:
            return None
        try:
            if kind is float:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise TypeError
                return float(value)
            if kind is int:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise TypeError
                return value
            if not isinstance(value, kind):
                raise TypeError
            return value
        except TypeError:
            raise ConfigError(self.field(key), f"expected {kind.__name__}, got {value!r}") from None

    def finish(self) -> None:
        extra = sorted(set(self.data) - self.used)
        if extra:
            raise ConfigError(self.field(extra[0]), "unknown field")


def _build(path: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as e:
        raise ConfigError(path, str(e)) from None


def _device(data: Any) -> DevicePhysics:
    if data == "default":
        return default_device()
    s = _Section(data, "device")
    dev = _build(
        "device",
        DevicePhysics,
        cross_section_S=s.get("cross_section_S_m2"),
        saturation_Ms=s.get("saturation_Ms_A_per_m"),
        switching_Sw=s.get("switching_Sw_C"),
        initial_m0=s.get("initial_m0", 0.0),
        coercive_Hc=s.get("coercive_Hc_A_per_m", 0.0),
    )
    s.finish()
    return dev


def _waveform(data: Any, base: Path) -> DriveWaveform:
    s = _Section(data, "waveform")
    kind = s.get("type", kind=str)
    if kind == "step":
        w = _build(
            "waveform",
            Step,
            amplitude_I=s.get("amplitude_I_A"),
            start_t=s.get("start_t_s", 0.0),
            rise_time=s.get("rise_time_s", 0.0),
        )
    elif kind == "sinusoid":
        w = _build(
            "waveform",
            Sinusoid,
            amplitude_I0=s.get("amplitude_I0_A"),
            omega=s.get("omega_rad_s"),
            phase=s.get("phase_rad", 0.0),
            charge_offset=s.get("charge_offset_C", 0.0),
        )
    elif kind == "pulse_train":
        pulses = []
        for n, item in enumerate(s.get("pulses", kind=list)):
            p = _Section(item, f"waveform.pulses[{n}]")
            pulses.append(Pulse(p.get("start_t_s"), p.get("duration_s"), p.get("amplitude_A")))
            p.finish()
        w = _build("waveform.pulses", PulseTrain, pulses=tuple(pulses))
    elif kind == "tabulated":
        csv_path = s.get("csv_path", None, kind=str)
        samples = s.get("samples_s_A", None, kind=list)
        if (csv_path is None) == (samples is None):
            raise ConfigError("waveform", "tabulated needs exactly one of csv_path or samples_s_A")
        if csv_path is not None:
            target = (base / csv_path) if not Path(csv_path).is_absolute() else Path(csv_path)
            try:
                w = Tabulated.from_csv(target)
            except OSError as e:
                raise ConfigError("waveform.csv_path", f"cannot read {target}: {e.strerror}") from None
            except (ValueError, IndexError) as e:
                raise ConfigError("waveform.csv_path", str(e)) from None
        else:
            w = _build("waveform.samples_s_A", Tabulated.from_samples, samples=samples)
    else:
        raise ConfigError("waveform.type", f"expected step, sinusoid, pulse_train or tabulated, got {kind!r}")
    s.finish()
    return w


def _geometry(data: Any) -> CoreGeometry:
    if data is None or data == "default":
        return default_geometry()
    s = _Section(data, "geometry")
    g = _build(
        "geometry",
        CoreGeometry,
        outer_D=s.get("outer_D_cm"),
        inner_d=s.get("inner_d_cm"),
        height_h=s.get("height_h_cm"),
        permeability_mu=s.get("permeability_mu", 1.0),
        turns_N=s.get("turns_N", 1, kind=int),
    )
    s.finish()
    return g


def _sim(data: Any, geom: CoreGeometry) -> SimConfig:
    s = _Section(data, "sim")
    s.used.add("parasitic_L_H")
    L = s.data.get("parasitic_L_H", 0.0)
    if L == "geometry":
        L = mh_to_henry(inductance(geom))
    elif isinstance(L, bool) or not isinstance(L, (int, float)):
        raise ConfigError("sim.parasitic_L_H", f"expected a number or \"geometry\", got {L!r}")
    lpf = None
    if s.data.get("lpf") is not None:
        f = _Section(s.data["lpf"], "sim.lpf")
        lpf = _build("sim.lpf", FilterSpec, cutoff_fc=f.get("cutoff_fc_Hz"), order=f.get("order", 1, kind=int))
        f.finish()
    s.used.add("lpf")
    cfg = _build(
        "sim",
        SimConfig,
        t_start=s.get("t_start_s", 0.0),
        t_end=s.get("t_end_s"),
        dt=s.get("dt_s", None),
        parasitic_L=float(L),
        lpf=lpf,
        step_rise_time=s.get("step_rise_time_s", None),
    )
    s.finish()
    return cfg


def _editors(data: Any) -> Optional[EditorsLoopParams]:
    if data is None:
        return None
    s = _Section(data, "editors_loop")
    p = _build(
        "editors_loop",
        EditorsLoopParams,
        slope_A=s.get("slope_A_m_per_A"),
        coercive_Hc=s.get("coercive_Hc_A_per_m"),
    )
    s.finish()
    return p


def _outputs(data: Any) -> tuple[OutputRequest, ...]:
    if not isinstance(data, list) or not data:
        raise ConfigError("outputs", "at least one output must be requested")
    out = []
    for n, item in enumerate(data):
        path = f"outputs[{n}]"
        s = _Section(item, path)
        kind = s.get("kind", kind=str)
        if kind not in OUTPUT_KINDS:
            raise ConfigError(f"{path}.kind", f"expected one of {', '.join(OUTPUT_KINDS)}, got {kind!r}")
        x = s.get("x", None, kind=str)
        y = s.get("y", None, kind=str)
        if kind in ("loop_csv", "loop_svg"):
            for key, col in (("x", x), ("y", y)):
                if col is None:
                    raise ConfigError(f"{path}.{key}", "loop outputs need x and y columns")
                if col not in COLUMNS:
                    raise ConfigError(f"{path}.{key}", f"unknown column {col!r}; expected one of {', '.join(COLUMNS)}")
        default_file = {
            "trace_csv": "trace.csv",
            "loop_csv": f"loop_{y}_{x}.csv",
            "loop_svg": f"loop_{y}_{x}.svg",
            "criteria_json": "criteria.json",
            "scaling_csv": "scaling.csv",
            "editors_loop_csv": "editors_loop.csv",
        }[kind]
        req = OutputRequest(
            kind=kind,
            file=s.get("file", default_file, kind=str),
            x=x,
            y=y,
            h_min_cm=s.get("h_min_cm", 1e-7),
            h_max_cm=s.get("h_max_cm", 1.0),
            points=s.get("points", 8, kind=int),
        )
        s.finish()
        if Path(req.file).name != req.file:
            raise ConfigError(f"{path}.file", "must be a bare file name inside the output directory")
        out.append(req)
    return tuple(out)


def parse_scenario(data: Any, base: Union[str, Path] = ".") -> ScenarioConfig:
    top = _Section(data, "")
    for key in ("device", "waveform", "sim", "geometry", "editors_loop", "outputs"):
        top.used.add(key)
    top.finish()
    if "outputs" not in data:
        raise ConfigError("outputs", "at least one output must be requested")
    for key in ("device", "waveform", "sim"):
        if key not in data:
            raise ConfigError(key, "required section is missing")
    geom = _geometry(data.get("geometry"))
    editors = _editors(data.get("editors_loop"))
    if editors is None and any(o.get("kind") == "editors_loop_csv" for o in data["outputs"] if isinstance(o, dict)):
        raise ConfigError("editors_loop", "editors_loop_csv output needs an editors_loop section")
    return ScenarioConfig(
        device=_device(data["device"]),
        waveform=_waveform(data["waveform"], Path(base)),
        sim=_sim(data["sim"], geom),
        geometry=geom,
        outputs=_outputs(data["outputs"]),
        editors_loop=editors,
    )


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read a scenario file; bare names like ``fig1_loop`` resolve to the bundled scenarios."""
    path = resolve_scenario(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    return parse_scenario(data, path.parent)


def bundled_scenarios() -> list[str]:
    root = resources.files("phimem") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".cfg"))


def resolve_scenario(path: Union[str, Path]) -> Path:
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.name.endswith(".cfg") else p.name + ".cfg"
    candidate = Path(str(resources.files("phimem") / "scenarios" / name))
    return candidate if candidate.exists() else p
