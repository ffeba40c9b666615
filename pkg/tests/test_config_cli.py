"""Configuration parsing and the command-line workflow."""
import math
import subprocess
import sys

import numpy as np
import pytest

from vortexgyro.cli import main
from vortexgyro.config import ConfigError, RunConfig, build_config, dump_config, load_config, parse_pairs
from vortexgyro.export import read_csv, read_pgm, read_record
from vortexgyro.interference import DensityField, PixelGrid
from vortexgyro.readout import extract_fringe_phase, wrap_phase


def _run(tmp_path, command, *sets, name="out", seed=None):
    out = tmp_path / name
    argv = [command, "--out", str(out)]
    for s in sets:
        argv += ["--set", s]
    if seed is not None:
        argv += ["--seed", str(seed)]
    return main(argv), out


def _pattern_phase(out, l):
    data = read_csv(out / "pattern.csv")
    n = int(round(math.sqrt(data["density"].size)))
    grid = PixelGrid.for_trap(RunConfig().trap, n)
    return extract_fringe_phase(DensityField(grid, data["density"].reshape(n, n), 0.8e-6), l)


# --- config -----------------------------------------------------------------

def test_dump_round_trips():
    cfg = build_config(parse_pairs("""
        seed = 9   # comment
        superposition.l = 5
        superposition.b_plus = 0.6+0.2j
        superposition.b_minus = 0.7
        schedule.pulse_shape = sin_squared
        readout.ring_mask = true
        trap.omega_rho = 21991.148575128552
    """))
    again = build_config(parse_pairs(dump_config(cfg)))
    assert again == cfg
    assert again.probe.rng_seed == 9


def test_defaults_round_trip():
    assert build_config(parse_pairs(dump_config(RunConfig()))) == RunConfig()


@pytest.mark.parametrize("pair, key", [
    (("trap.L_q", "1"), "trap.L_q"),
    (("nosuch.key", "1"), "nosuch.key"),
    (("rotation.n_frames", "two"), "rotation.n_frames"),
    (("schedule.pulse_width", "-1e-3"), "schedule.pulse_width"),
    (("probe.rng_seed", "3"), "probe.rng_seed"),
])
def test_bad_keys_and_values_named(pair, key):
    with pytest.raises(ConfigError) as info:
        build_config([pair])
    assert str(info.value).startswith(key)


def test_file_then_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("rotation.omega = 0.1\nseed = 4\n")
    cfg = load_config(path, ["rotation.omega=0.2"], seed=8, output_dir="x")
    assert cfg.rotation.omega == 0.2 and cfg.seed == 8 and cfg.output_dir == "x"


# --- transfer ---------------------------------------------------------------

def test_transfer_default_split(tmp_path, capsys):
    code, out = _run(tmp_path, "transfer")
    assert code == 0
    summary = read_record(out / "transfer_summary.txt")
    assert float(summary["final_plus"]) == pytest.approx(0.6, abs=0.02)
    assert float(summary["final_minus"]) == pytest.approx(0.4, abs=0.02)
    traj = read_csv(out / "transfer.csv")
    assert traj["F"][0] == pytest.approx(1.0) and traj["F"][-1] == pytest.approx(-1.0, abs=0.02)
    assert (out / "transfer_manifest.txt").exists()
    assert "|beta|^2 = 0.6000" in capsys.readouterr().out


def test_transfer_single_branch(tmp_path):
    code, out = _run(tmp_path, "transfer", "schedule.omega_minus_peak=0")
    assert code == 0
    assert float(read_record(out / "transfer_summary.txt")["final_plus"]) >= 0.99


def test_invalid_width_exits_one(tmp_path, capsys):
    code, _ = _run(tmp_path, "transfer", "schedule.pulse_width=-2e-3")
    assert code == 1
    assert "schedule.pulse_width" in capsys.readouterr().err


def test_incomplete_transfer_exits_two(tmp_path, capsys):
    code, _ = _run(tmp_path, "transfer", "schedule.omega_plus_peak=1000", "schedule.omega_minus_peak=1000",
                   "schedule.omega_coupling_peak=1000")
    assert code == 2
    assert "incomplete transfer" in capsys.readouterr().err


def test_missing_config_file_exits_one(tmp_path):
    assert main(["snr", "--config", str(tmp_path / "absent.cfg"), "--out", str(tmp_path)]) == 1


# --- pattern ----------------------------------------------------------------

def test_pattern_four_lobes_on_axes(tmp_path):
    code, out = _run(tmp_path, "pattern", "superposition.l=2", "rotation.omega=0")
    assert code == 0
    est = _pattern_phase(out, 2)
    assert abs(est.phi_hat) <= 1e-6  # maxima at phi = 0, pi/2, pi, 3pi/2
    levels = read_pgm(out / "pattern.pgm")
    assert levels.shape == (256, 256) and levels.max() == 255
    summary = read_record(out / "pattern_summary.txt")
    assert float(summary["total_atoms"]) == pytest.approx(1e6, rel=1e-3)


def test_pattern_turns_by_omega_t(tmp_path):
    _, still = _run(tmp_path, "pattern", "rotation.omega=0", name="still")
    code, turned = _run(tmp_path, "pattern", "rotation.omega=0.05", "pattern.t=4", name="turned")
    assert code == 0
    delta = _pattern_phase(turned, 2).phi_hat - _pattern_phase(still, 2).phi_hat
    assert abs(wrap_phase(delta - 2 * 2 * 0.2)) <= 1e-6  # rigid turn of 0.2 rad
    assert float(read_record(turned / "pattern_summary.txt")["rotation_angle"]) == pytest.approx(0.2)


def test_single_vortex_pattern_is_a_ring(tmp_path):
    code, out = _run(tmp_path, "pattern", "superposition.b_plus=1", "superposition.b_minus=0")
    assert code == 0
    assert _pattern_phase(out, 2).amplitude <= 1e-3


def test_pattern_from_stirap(tmp_path):
    code, out = _run(tmp_path, "pattern", "superposition.from_stirap=true", "rotation.omega=0")
    assert code == 0
    assert 2 * _pattern_phase(out, 2).amplitude == pytest.approx(2 * math.sqrt(0.24), rel=2e-3)


def test_clipped_pattern_exits_two(tmp_path):
    code, _ = _run(tmp_path, "pattern", "pattern.span=0.8")
    assert code == 2


# --- spin -------------------------------------------------------------------

def test_spin_large_charge_recovers_rate(tmp_path, capsys):
    code, out = _run(tmp_path, "spin", "superposition.l=100", "rotation.omega=6e-6",
                     "rotation.t_end=1", "rotation.n_frames=10", seed=7)
    assert code == 0
    rate = read_record(out / "rate.txt")
    omega_hat, stderr = float(rate["omega_hat"]), float(rate["stderr"])
    assert stderr > 0
    assert abs(omega_hat - 6e-6) <= 3 * stderr
    assert "omega_hat" in capsys.readouterr().out


def test_spin_null_rotation(tmp_path):
    code, out = _run(tmp_path, "spin", "rotation.omega=0", "rotation.t_end=1", "rotation.n_frames=6", seed=3)
    assert code == 0
    rate = read_record(out / "rate.txt")
    assert abs(float(rate["omega_hat"])) <= 3 * float(rate["stderr"])


def test_spin_is_reproducible(tmp_path):
    sets = ("rotation.n_frames=4", "pattern.n_pixels=96")
    _run(tmp_path, "spin", *sets, name="a", seed=5)
    _run(tmp_path, "spin", *sets, name="b", seed=5)
    _run(tmp_path, "spin", *sets, name="c", seed=6)
    for fname in ("frames.csv", "rate.txt"):
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()
    assert (tmp_path / "a" / "frames.csv").read_bytes() != (tmp_path / "c" / "frames.csv").read_bytes()


def test_spin_aliasing_exits_two(tmp_path, capsys):
    code, _ = _run(tmp_path, "spin", "rotation.omega=0.75", "rotation.t_end=2", "rotation.n_frames=3",
                   "pattern.n_pixels=64")
    assert code == 2
    assert "frame" in capsys.readouterr().err


def test_spin_needs_two_frames(tmp_path):
    assert _run(tmp_path, "spin", "rotation.n_frames=1")[0] == 1


# --- snr --------------------------------------------------------------------

def test_snr_sweep_outputs(tmp_path):
    code, out = _run(tmp_path, "snr", "superposition.l=100", "rotation.omega=5e-8")
    assert code == 0
    summary = {k: float(v) for k, v in read_record(out / "snr_summary.txt").items()}
    assert summary["omega_min"] == pytest.approx(5e-8, rel=1e-12)
    assert abs(math.log10(summary["argmax_n_sc"] / summary["loss_scale_half"])) <= summary["log_grid_step"]
    table = read_csv(out / "snr.csv")
    np.testing.assert_allclose(table["snr"], summary["phi_omega"] * np.sqrt(table["n_sc"]), rtol=1e-12)


def test_module_entry_point(tmp_path):
    result = subprocess.run([sys.executable, "-m", "vortexgyro", "snr", "--out", str(tmp_path)],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "effective SNR peaks" in result.stdout
