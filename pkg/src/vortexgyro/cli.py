"""Command-line front end.

    vortexgyro transfer  [--config PATH] [--seed INT] [--out DIR] [--set key=value ...]
    vortexgyro pattern   ...
    vortexgyro spin      ...
    vortexgyro snr       ...

Exit status: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import export
from .condensate import build_profile, solve_chemical_potential
from .config import RunConfig, dump_config, load_config
from .errors import InvalidParameter, NumericalError
from .imaging import ensemble_seed, sensitivity, snapshot, snr_sweep
from .interference import (
    PixelGrid,
    VortexSuperposition,
    density,
    pattern_rotation_angle,
    sagnac_phase,
)
from .readout import extract_fringe_phase, fit_rotation_rate
from .stirap import evolve_amplitudes, final_superposition

log = logging.getLogger("vortexgyro")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


def _prepare_output(cfg: RunConfig, command):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{command}_manifest.txt").write_text(f"# command = {command}\n" + dump_config(cfg))
    return out


def _profile(cfg: RunConfig):
    sup = cfg.superposition
    mu = None if sup.per_charge_mu else solve_chemical_potential(cfg.trap, 0)
    return build_profile(cfg.trap, sup.l, mu=mu, per_charge_mu=sup.per_charge_mu)


def build_superposition(cfg: RunConfig, profile=None):
    sup = cfg.superposition
    if sup.b_plus is not None:
        b_plus, b_minus = complex(sup.b_plus), complex(sup.b_minus)
        norm = np.sqrt(abs(b_plus) ** 2 + abs(b_minus) ** 2)
        if norm == 0:
            raise InvalidParameter("superposition.b_plus", "amplitudes cannot both vanish")
        return VortexSuperposition(b_plus / norm, b_minus / norm, sup.l, 0.0, profile)
    if sup.from_stirap:
        traj = evolve_amplitudes(cfg.schedule)
        return final_superposition(traj, sup.l, profile=profile)
    return VortexSuperposition.equal(sup.l, profile)


def _grid(cfg: RunConfig):
    p = cfg.pattern
    return PixelGrid.for_trap(cfg.trap, p.n_pixels, p.span, p.mode)


def cmd_transfer(cfg: RunConfig):
    out = _prepare_output(cfg, "transfer")
    traj = evolve_amplitudes(cfg.schedule)
    export.write_trajectory_csv(out / "transfer.csv", traj)
    summary = traj.summary()
    summary["completed"] = summary["residual_ground"] <= 0.01
    export.write_record(out / "transfer_summary.txt", summary)
    print(
        f"|beta|^2 = {summary['final_plus']:.4f}  |gamma|^2 = {summary['final_minus']:.4f}  "
        f"|alpha|^2 = {summary['residual_ground']:.2e}  F(t_end) = {summary['final_transfer_function']:+.4f}"
    )
    if not summary["completed"]:
        print(f"error: incomplete transfer, residual ground population "
              f"{summary['residual_ground']:.3e} > 0.01", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_pattern(cfg: RunConfig):
    out = _prepare_output(cfg, "pattern")
    profile = _profile(cfg)
    l = cfg.superposition.l
    phi = sagnac_phase(l, cfg.rotation.omega, cfg.pattern.t)
    state = build_superposition(cfg, profile).with_sagnac_phase(phi)
    field = density(state, _grid(cfg), supersample=cfg.pattern.supersample)
    export.write_pgm(out / "pattern.pgm", field.values, bits=cfg.pattern.bits)
    export.write_field_csv(out / "pattern.csv", field)
    export.write_profile_csv(out / "profile.csv", profile)
    record = {
        "l": l,
        "omega": cfg.rotation.omega,
        "t": cfg.pattern.t,
        "sagnac_phase": phi,
        "rotation_angle": pattern_rotation_angle(phi, l),
        "chemical_potential": profile.chemical_potential,
        "total_atoms": field.total_atoms(),
    }
    export.write_record(out / "pattern_summary.txt", record)
    print(f"sagnac phase {phi:.6g} rad, pattern rotated by {record['rotation_angle']:.6g} rad")
    return EXIT_OK


def simulate_frames(cfg: RunConfig, profile, state):
    """Seeded noisy frames over the rotation window, one per timestamp."""
    rot = cfg.rotation
    times = np.linspace(rot.t_start, rot.t_end, rot.n_frames)
    grid = _grid(cfg)
    frames = []
    for k, t in enumerate(times):
        phi = sagnac_phase(state.charge_magnitude, rot.omega, t)
        field = density(state.with_sagnac_phase(phi), grid, supersample=cfg.pattern.supersample)
        frames.append((float(t), snapshot(field, cfg.probe, seed=ensemble_seed(cfg.seed, k))))
    return frames


def cmd_spin(cfg: RunConfig):
    if cfg.rotation.n_frames < 2:
        raise InvalidParameter("rotation.n_frames", "spin needs at least 2 frames")
    out = _prepare_output(cfg, "spin")
    profile = _profile(cfg)
    state = build_superposition(cfg, profile)
    l = state.charge_magnitude
    frames = simulate_frames(cfg, profile, state)
    ro = cfg.readout
    demod = {"contrast_floor": ro.contrast_floor}
    if ro.center == "grid":
        demod["center"] = (0.0, 0.0)
    if ro.ring_mask:
        demod["ring"] = profile.support
    estimates = [extract_fringe_phase(img, l, **demod) for _, img in frames]
    times = [t for t, _ in frames]
    export.write_csv(
        out / "frames.csv", ["t", "phi_hat", "amplitude"],
        [times, [e.phi_hat for e in estimates], [e.amplitude for e in estimates]],
    )
    rate = fit_rotation_rate(times, [e.phi_hat for e in estimates], l, margin=ro.margin)
    record = {
        "omega_hat": rate.omega_hat,
        "stderr": rate.stderr,
        "residual_rms": rate.residual_rms,
        "n_frames": rate.n_frames,
        "omega_true": cfg.rotation.omega,
        "low_contrast_frames": sum(e.low_contrast for e in estimates),
    }
    export.write_record(out / "rate.txt", record)
    print(f"omega_hat = {rate.omega_hat:.6e} +/- {rate.stderr:.2e} rad/s "
          f"(true {cfg.rotation.omega:.6e})")
    return EXIT_OK


def cmd_snr(cfg: RunConfig):
    out = _prepare_output(cfg, "snr")
    l = cfg.superposition.l
    s = cfg.snr
    phi = sagnac_phase(l, cfg.rotation.omega, s.t)
    n, plain, effective = snr_sweep(phi, s.n_min, s.n_max, s.n_points, cfg.probe.loss_scale)
    export.write_csv(out / "snr.csv", ["n_sc", "snr", "effective_snr"], [n, plain, effective])
    best = float(n[int(np.argmax(effective))])
    omega_min = float(sensitivity(l, s.t, cfg.probe.photon_rate))
    record = {
        "phi_omega": phi,
        "argmax_n_sc": best,
        "loss_scale_half": cfg.probe.loss_scale / 2,
        "log_grid_step": float(np.log10(n[1] / n[0])),
        "omega_min": omega_min,
        "operating_photon_rate": cfg.probe.photon_rate,
    }
    export.write_record(out / "snr_summary.txt", record)
    print(f"effective SNR peaks at N_sc = {best:.4g} /s; Omega_min = {omega_min:.4g} rad/s/sqrt(Hz)")
    return EXIT_OK


COMMANDS = {
    "transfer": cmd_transfer,
    "pattern": cmd_pattern,
    "spin": cmd_spin,
    "snr": cmd_snr,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--seed", type=int, help="base RNG seed")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="vortexgyro", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "transfer": "integrate the STIRAP transfer and write populations",
        "pattern": "render the fringe pattern at a given rotation",
        "spin": "simulate a noisy frame series and estimate the rotation rate",
        "snr": "sweep the photon rate and report SNR and sensitivity",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.overrides, seed=args.seed, output_dir=args.out)
        return COMMANDS[args.command](cfg)
    except InvalidParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
