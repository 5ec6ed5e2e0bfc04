import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from phimem.cli import main
from phimem.config import ConfigError, bundled_scenarios, load_scenario, parse_scenario
from phimem.core import default_device
from phimem.parasitics import inductance, mh_to_henry
from phimem.sim import SimConfig, simulate
from phimem.waveforms import PulseTrain, Sinusoid, Step, Tabulated

ATANH_09 = 1.4722194895832202300  # mpmath

BASE = {
    "device": {"cross_section_S_m2": 5e-5, "saturation_Ms_A_per_m": 3.8e5, "switching_Sw_C": 1e-6, "initial_m0": 0.0},
    "waveform": {"type": "sinusoid", "amplitude_I0_A": 0.1, "omega_rad_s": 5e4},
    "sim": {"t_start_s": 0.0, "t_end_s": 5.026548245743669e-4},
    "outputs": [{"kind": "trace_csv", "file": "trace.csv"}],
}


def variant(**sections):
    doc = json.loads(json.dumps(BASE))
    doc.update(sections)
    return doc


def write_cfg(tmp_path, doc, name="s.cfg"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


class TestParse:
    def test_base(self, tmp_path):
        scn = parse_scenario(BASE, tmp_path)
        assert isinstance(scn.waveform, Sinusoid)
        assert scn.sim.parasitic_L == 0.0
        assert scn.outputs[0].kind == "trace_csv"

    def test_default_device_keyword(self, tmp_path):
        assert parse_scenario(variant(device="default"), tmp_path).device == default_device()

    def test_geometry_inductance(self, tmp_path):
        doc = variant(sim={"t_start_s": 0, "t_end_s": 1e-3, "parasitic_L_H": "geometry"})
        scn = parse_scenario(doc, tmp_path)
        assert scn.sim.parasitic_L == pytest.approx(mh_to_henry(inductance(scn.geometry)))

    def test_waveform_kinds(self, tmp_path):
        pulses = {"type": "pulse_train", "pulses": [{"start_t_s": 0, "duration_s": 1e-4, "amplitude_A": 0.1}]}
        assert isinstance(parse_scenario(variant(waveform=pulses), tmp_path).waveform, PulseTrain)
        step = {"type": "step", "amplitude_I_A": 0.1}
        assert isinstance(parse_scenario(variant(waveform=step), tmp_path).waveform, Step)
        (tmp_path / "drive.csv").write_text("t,i\n0,0\n1,1\n")
        tab = {"type": "tabulated", "csv_path": "drive.csv"}
        assert isinstance(parse_scenario(variant(waveform=tab), tmp_path).waveform, Tabulated)
        inline = {"type": "tabulated", "samples_s_A": [[0, 0], [1, 1]]}
        assert isinstance(parse_scenario(variant(waveform=inline), tmp_path).waveform, Tabulated)

    @pytest.mark.parametrize(
        "doc, field",
        [
            (variant(outputs=[]), "outputs"),
            ({k: v for k, v in BASE.items() if k != "outputs"}, "outputs"),
            (variant(device={**BASE["device"], "switching_Sw_C": -1.0}), "device"),
            (variant(device={**BASE["device"], "sw": 1.0}), "device.sw"),
            (variant(waveform={"type": "square"}), "waveform.type"),
            (variant(waveform={"type": "sinusoid", "amplitude_I0_A": "big", "omega_rad_s": 1.0}), "waveform.amplitude_I0_A"),
            (variant(sim={"t_start_s": 0.0}), "sim.t_end_s"),
            (variant(outputs=[{"kind": "loop_csv", "x": "H", "y": "bogus", "file": "a.csv"}]), "outputs[0].y"),
            (variant(outputs=[{"kind": "movie", "file": "a.mp4"}]), "outputs[0].kind"),
        ],
    )
    def test_errors_name_the_field(self, tmp_path, doc, field):
        with pytest.raises(ConfigError) as e:
            parse_scenario(doc, tmp_path)
        assert e.value.field == field
        assert field in str(e.value)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("{not json")
        with pytest.raises(ConfigError):
            load_scenario(p)


class TestExitCodes:
    def test_ok(self, tmp_path):
        assert main(["run", "--config", str(write_cfg(tmp_path, BASE)), "--out", str(tmp_path / "o")]) == 0
        assert (tmp_path / "o" / "trace.csv").exists()

    def test_empty_outputs_is_config_error(self, tmp_path, capsys):
        code = main(["run", "--config", str(write_cfg(tmp_path, variant(outputs=[]))), "--out", str(tmp_path)])
        assert code == 1
        assert "outputs" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]) == 1

    def test_simulation_precondition(self, tmp_path, capsys):
        doc = variant(waveform={"type": "tabulated", "samples_s_A": [[0, 0], [1e-4, 1]]})
        assert main(["run", "--config", str(write_cfg(tmp_path, doc)), "--out", str(tmp_path / "o")]) == 2
        assert "tabulated" in capsys.readouterr().err

    def test_too_few_periods_for_loop(self, tmp_path):
        doc = variant(
            sim={"t_start_s": 0.0, "t_end_s": 1.5e-4},
            outputs=[{"kind": "loop_csv", "x": "H", "y": "m", "file": "l.csv"}],
        )
        assert main(["run", "--config", str(write_cfg(tmp_path, doc)), "--out", str(tmp_path / "o")]) == 2

    def test_io_failure(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert main(["run", "--config", str(write_cfg(tmp_path, BASE)), "--out", str(blocker / "sub")]) == 3

    def test_bad_override(self, tmp_path):
        step = variant(waveform={"type": "step", "amplitude_I_A": 0.1})
        assert main(["run", "--config", str(write_cfg(tmp_path, step)), "--out", str(tmp_path), "--omega", "5"]) == 1


def trace_scenarios():
    return [n for n in bundled_scenarios() if any(o.kind == "trace_csv" for o in load_scenario(n).outputs)]


@pytest.mark.parametrize("name", bundled_scenarios())
def test_bundled_scenarios_are_deterministic(tmp_path, name):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", name, "--out", str(a)]) == 0
    assert main(["run", "--config", name, "--out", str(b)]) == 0
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes(), f


@pytest.mark.parametrize("name", trace_scenarios())
def test_trace_csv_round_trip(tmp_path, name):
    assert main(["run", "--config", name, "--out", str(tmp_path)]) == 0
    scn = load_scenario(name)
    trace_file = next(o.file for o in scn.outputs if o.kind == "trace_csv")
    header, data = read_csv(tmp_path / trace_file)
    q = data[:, header.index("q")]
    again = simulate(scn.device, Tabulated.from_csv(tmp_path / trace_file), scn.sim, scn.geometry)
    assert np.max(np.abs(again.q - q)) / np.max(np.abs(q)) < 1e-9


def test_sinusoid_round_trip_residual_is_second_order(tmp_path):
    # linear interpolation of sampled sin(wt) integrates with O((w dt)^2) error
    dev = default_device()
    w = Sinusoid(0.1, 5e4)
    errs = []
    for n in (2000, 4000):
        cfg = SimConfig(0.0, 2 * w.period, dt=2 * w.period / n)
        tr = simulate(dev, w, cfg)
        tr.to_csv(tmp_path / "t.csv")
        again = simulate(dev, Tabulated.from_csv(tmp_path / "t.csv"), cfg)
        errs.append(np.max(np.abs(again.q - tr.q)) / np.max(np.abs(tr.q)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_fig1_loop_h_zero_rows(tmp_path):
    assert main(["run", "--config", "examples/fig1_loop.cfg", "--out", str(tmp_path)]) == 0
    header, data = read_csv(tmp_path / "loop_m_H.csv")
    assert header == ["H", "m"]
    H = data[:, 0]
    m_zero = data[np.abs(H) <= 1e-12 * np.max(np.abs(H)), 1]
    expected = math.tanh(0.1 / (5e4 * 1e-6))
    assert m_zero.size >= 2
    np.testing.assert_allclose(np.abs(m_zero), expected, atol=1e-9, rtol=0)
    assert m_zero.min() < 0 < m_zero.max()
    svg = (tmp_path / "loop_m_H.svg").read_text()
    assert svg.startswith("<svg") and svg.count("<polyline") == 2


def test_step_response_trace(tmp_path):
    assert main(["run", "--config", "step_response", "--out", str(tmp_path)]) == 0
    scn = load_scenario("step_response")
    header, data = read_csv(tmp_path / "trace.csv")
    assert header == ["t", "i", "q", "H", "m", "phi", "v_mem", "v_L", "v_total"]
    t, v_mem, v_L = data[:, 0], data[:, header.index("v_mem")], data[:, header.index("v_L")]
    rise = scn.sim.rise_time
    # past the ramp the charge lags an ideal step by rise/2
    t_star = 1e-6 * ATANH_09 / 0.1 + rise / 2
    k = int(np.argmax(v_mem))
    assert abs(t[k] - t_star) <= t[1] - t[0]
    assert np.max(v_L) == pytest.approx(scn.sim.parasitic_L * 0.1 / rise, rel=1e-6)
    assert np.argmax(v_L) < np.searchsorted(t, rise + 1e-12)


def test_scaling_subcommand(capsys):
    assert main(["scaling", "--h-min", "1e-7", "--h-max", "1", "--points", "8"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "h_cm,L_eq1_mH,L_eq2_printed_mH"
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    assert rows.shape == (8, 3)
    np.testing.assert_allclose(rows[:, 1] / rows[:, 0], rows[0, 1] / rows[0, 0], rtol=1e-12)
    np.testing.assert_allclose(rows[:, 2] / rows[:, 1], math.pi, rtol=1e-12)


def test_scaling_subcommand_to_file(tmp_path):
    assert main(["scaling", "--out", str(tmp_path)]) == 0
    header, rows = read_csv(tmp_path / "scaling.csv")
    assert rows.shape == (8, 3)


def test_criteria_subcommand(tmp_path, capsys):
    assert main(["criteria", "--device", "default", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    doc = json.loads((tmp_path / "criteria.json").read_text())
    assert doc["chua"] is True and doc["georgiou"] is True


def test_criteria_from_config(capsys):
    assert main(["criteria", "--config", "fig1_loop"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_fingerprint_subcommand(capsys):
    assert main(["fingerprint", "--L", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    pinched = next(line for line in lines if line.startswith("pinched hysteresis"))
    decay = next(line for line in lines if line.startswith("lobe-area decay"))
    assert "PASS" in pinched and "PASS" in decay


def test_fingerprint_with_inductance_fails_pinch(capsys):
    assert main(["fingerprint", "--L", "1e-6", "--tol-v", "1e-6"]) == 0
    pinched = next(line for line in capsys.readouterr().out.splitlines() if line.startswith("pinched"))
    assert "FAIL" in pinched and "6.28" in pinched


def test_loop_and_simulate_subcommands(tmp_path):
    assert main(["loop", "--config", "pinched_vi", "--x", "i", "--y", "v_total", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "loop_v_total_i.csv").exists() and (tmp_path / "loop_v_total_i.svg").exists()
    assert main(["simulate", "--config", "pinched_vi", "--out", str(tmp_path), "--file", "x.csv"]) == 0
    assert read_csv(tmp_path / "x.csv")[0][0] == "t"


def test_scenarios_listing(capsys):
    assert main(["scenarios"]) == 0
    assert "fig1_loop.cfg" in capsys.readouterr().out.split()


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "phimem", "scaling", "--points", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert len(r.stdout.splitlines()) == 4
