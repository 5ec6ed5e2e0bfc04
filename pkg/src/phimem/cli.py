"""Command-line front end.

Exit status: 0 ok, 1 configuration error, 2 simulation precondition failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .config import ConfigError, OutputRequest, ScenarioConfig, bundled_scenarios, load_scenario
from .core import default_device, editors_full_loop
from .criteria import (
    ConstitutiveSamples,
    check_criteria,
    default_lobe_omega,
    fingerprint_lobe_decay,
    fingerprint_pinched,
    lobe_decay_omegas,
)
from .parasitics import FilterSpec, scaling_study
from .sim import SimConfig, SimTrace, SimulationError, extract_loop, simulate, write_csv
from .svg import write_plot
from .waveforms import Sinusoid, Step

EXIT_OK, EXIT_CONFIG, EXIT_SIM, EXIT_IO = 0, 1, 2, 3
SCALING_HEADER = ("h_cm", "L_eq1_mH", "L_eq2_printed_mH")
LABELS = {
    "t": "t [s]",
    "i": "i [A]",
    "q": "q [C]",
    "H": "H [A/m]",
    "m": "m",
    "phi": "phi [Wb]",
    "v_mem": "v_mem [V]",
    "v_L": "v_L [V]",
    "v_total": "v_total [V]",
}


def apply_overrides(
    scn: ScenarioConfig,
    omega: Optional[float] = None,
    I0: Optional[float] = None,
    L: Optional[float] = None,
    fc: Optional[float] = None,
) -> ScenarioConfig:
    w, sim = scn.waveform, scn.sim
    try:
        if omega is not None:
            if not isinstance(w, Sinusoid):
                raise ConfigError("--omega", "only applies to sinusoid drives")
            w = dataclasses.replace(w, omega=omega)
        if I0 is not None:
            if isinstance(w, Sinusoid):
                w = dataclasses.replace(w, amplitude_I0=I0)
            elif isinstance(w, Step):
                w = dataclasses.replace(w, amplitude_I=I0)
            else:
                raise ConfigError("--I0", "only applies to sinusoid and step drives")
        if L is not None:
            sim = dataclasses.replace(sim, parasitic_L=L)
        if fc is not None:
            sim = dataclasses.replace(sim, lpf=FilterSpec(fc))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError("override", str(e)) from None
    return dataclasses.replace(scn, waveform=w, sim=sim)


def _editors_H_max(scn: ScenarioConfig, trace: Optional[SimTrace]) -> float:
    if trace is not None and np.max(np.abs(trace.H)) > 0:
        return float(np.max(np.abs(trace.H)))
    return 3.0 * scn.editors_loop.coercive_Hc


def write_output(req: OutputRequest, scn: ScenarioConfig, trace: SimTrace, out_dir: Path) -> Path:
    path = out_dir / req.file
    if req.kind == "trace_csv":
        trace.to_csv(path)
    elif req.kind == "loop_csv":
        x, y = extract_loop(trace, req.x, req.y)
        write_csv(path, (req.x, req.y), zip(x, y))
    elif req.kind == "loop_svg":
        x, y = extract_loop(trace, req.x, req.y)
        series = [(x, y, "Phi memristor")]
        if scn.editors_loop is not None and (req.x, req.y) == ("H", "m"):
            H, m = editors_full_loop(scn.editors_loop, _editors_H_max(scn, trace))
            series.append((H, m, "tanh(A(H -/+ Hc))"))
        write_plot(path, series, LABELS[req.x], LABELS[req.y], title=f"{req.y} vs {req.x}")
    elif req.kind == "criteria_json":
        path.write_text(check_criteria(ConstitutiveSamples.from_device(scn.device)).to_json())
    elif req.kind == "scaling_csv":
        rows = scaling_study(scn.geometry.permeability_mu, scn.geometry.turns_N, req.h_min_cm, req.h_max_cm, req.points)
        write_csv(path, SCALING_HEADER, rows)
    elif req.kind == "editors_loop_csv":
        H, m = editors_full_loop(scn.editors_loop, _editors_H_max(scn, trace))
        write_csv(path, ("H", "m"), zip(H, m))
    else:
        raise ConfigError("outputs.kind", f"unsupported output {req.kind!r}")
    return path


def execute(scn: ScenarioConfig, out_dir: Path) -> list[Path]:
    """Simulate once and write every requested artifact."""
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = simulate(scn.device, scn.waveform, scn.sim, scn.geometry)
    return [write_output(req, scn, trace, out_dir) for req in scn.outputs]


def _load(args) -> ScenarioConfig:
    scn = load_scenario(args.config)
    return apply_overrides(
        scn,
        omega=getattr(args, "omega", None),
        I0=getattr(args, "I0", None),
        L=getattr(args, "L", None),
        fc=getattr(args, "fc", None),
    )


def cmd_run(args) -> int:
    for path in execute(_load(args), Path(args.out)):
        print(path)
    return EXIT_OK


def cmd_simulate(args) -> int:
    scn = _load(args)
    scn = dataclasses.replace(scn, outputs=(OutputRequest("trace_csv", args.file),))
    for path in execute(scn, Path(args.out)):
        print(path)
    return EXIT_OK


def cmd_loop(args) -> int:
    scn = _load(args)
    outputs = (
        OutputRequest("loop_csv", f"loop_{args.y}_{args.x}.csv", x=args.x, y=args.y),
        OutputRequest("loop_svg", f"loop_{args.y}_{args.x}.svg", x=args.x, y=args.y),
    )
    for path in execute(dataclasses.replace(scn, outputs=outputs), Path(args.out)):
        print(path)
    return EXIT_OK


def cmd_criteria(args) -> int:
    dev = load_scenario(args.config).device if args.config else default_device()
    report = check_criteria(ConstitutiveSamples.from_device(dev, q_span=args.span, points=args.points), tol=args.tol)
    sys.stdout.write(report.table())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "criteria.json").write_text(report.to_json())
    return EXIT_OK


def cmd_scaling(args) -> int:
    rows = scaling_study(args.mu, args.N, args.h_min, args.h_max, args.points)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "scaling.csv", SCALING_HEADER, rows)
        print(out / "scaling.csv")
    else:
        print(",".join(SCALING_HEADER))
        for row in rows:
            print(",".join("%.17g" % v for v in row))
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    if args.config:
        scn = _load(args)
        dev, w, sim = scn.device, scn.waveform, scn.sim
        if not isinstance(w, Sinusoid):
            raise ConfigError("waveform.type", "fingerprint needs a sinusoid drive")
    else:
        dev = default_device()
        w = Sinusoid(args.I0 if args.I0 is not None else 0.1, args.omega if args.omega is not None else 2 * math.pi * 1000)
        sim = SimConfig(
            0.0,
            4 * w.period,
            parasitic_L=args.L if args.L is not None else 0.0,
            lpf=FilterSpec(args.fc) if args.fc is not None else None,
        )
    pinched = fingerprint_pinched(simulate(dev, w, sim), args.tol_v)
    omega0 = default_lobe_omega(dev, w.amplitude_I0)
    decay = fingerprint_lobe_decay(dev, w.amplitude_I0, lobe_decay_omegas(omega0))
    print(f"{'fingerprint':<22}  verdict  detail")
    print(
        f"{'pinched hysteresis':<22}  {'PASS' if pinched.passed else 'FAIL':<7}  "
        f"worst |v| at i=0: {pinched.worst_offset:.4e} V over {pinched.crossings} crossings "
        f"(L={sim.parasitic_L:.4g} H, tol {args.tol_v:.1e} V)"
    )
    print(
        f"{'lobe-area decay':<22}  {'PASS' if decay.passed else 'FAIL':<7}  "
        f"area(16w0)/area(w0) = {decay.ratio:.4f}, w0 = {omega0:.6g} rad/s"
    )
    for omega, area in zip(decay.omegas, decay.areas):
        print(f"{'':<22}  {'':<7}  w = {omega:.6g} rad/s  area = {area:.6e} V*A")
    return EXIT_OK


def cmd_scenarios(args) -> int:
    for name in bundled_scenarios():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phimem", description="Phi memristor model, transient simulation and checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_args(sp, required=True):
        sp.add_argument("--config", required=required, help="scenario file, or the name of a bundled scenario")
        sp.add_argument("--omega", type=float, help="override sinusoid angular frequency [rad/s]")
        sp.add_argument("--I0", type=float, help="override drive amplitude [A]")
        sp.add_argument("--L", type=float, help="override parasitic inductance [H]")
        sp.add_argument("--fc", type=float, help="apply a first-order low-pass at this cutoff [Hz]")

    sp = sub.add_parser("run", help="write every output listed in the scenario")
    scenario_args(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("simulate", help="write the full trace CSV")
    scenario_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--file", default="trace.csv")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("loop", help="write one loop as CSV and SVG")
    scenario_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--x", default="H", choices=list(LABELS))
    sp.add_argument("--y", default="m", choices=list(LABELS))
    sp.set_defaults(func=cmd_loop)

    sp = sub.add_parser("criteria", help="Chua and Georgiou criteria on the model phi-q curve")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--config")
    group.add_argument("--device", choices=["default"], default="default")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--span", type=float, default=5.0, help="half-width of the q sweep in units of S_w")
    sp.add_argument("--points", type=int, default=256)
    sp.add_argument("--out", help="also write criteria.json here")
    sp.set_defaults(func=cmd_criteria)

    sp = sub.add_parser("scaling", help="inductance vs core height at D = 2d = 2h")
    sp.add_argument("--h-min", type=float, default=1e-7, help="[cm]")
    sp.add_argument("--h-max", type=float, default=1.0, help="[cm]")
    sp.add_argument("--points", type=int, default=8)
    sp.add_argument("--mu", type=float, default=1000.0, help="relative permeability")
    sp.add_argument("--N", type=int, default=1, help="turns")
    sp.add_argument("--out", help="write scaling.csv here instead of stdout")
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("fingerprint", help="pinched-hysteresis and lobe-decay batteries")
    scenario_args(sp, required=False)
    sp.add_argument("--tol-v", type=float, default=1e-9, help="pinch tolerance [V]")
    sp.set_defaults(func=cmd_fingerprint)

    sp = sub.add_parser("scenarios", help="list bundled scenario files")
    sp.set_defaults(func=cmd_scenarios)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationError as e:
        print(f"simulation error: {e}", file=sys.stderr)
        return EXIT_SIM
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"simulation error: {e}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
