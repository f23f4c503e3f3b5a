"""Command-line front end: point evaluation, sweeps, spectra, validation.

Exit codes: 0 success, 1 invalid configuration, 2 partial failures present,
3 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import extract_params, load_document, params_from_config, sweep_from_config
from .constants import CODATA_VERSION
from .dynamics import auxiliary_block, phase_noise_spectrum
from .errors import ConfigError, OptomechError
from .lyapunov import solve_lyapunov
from .parameters import solve_steady_state
from .simulate import (TrajectoryConfig, estimate_stationary_covariance,
                       simulate_phase_noise)
from .spectral import effective_response, laser_correlation
from .sweep import emit_figure_data, evaluate_point, figure_recipe, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2
EXIT_INTERNAL = 3


def _metadata(params) -> dict:
    return {
        "tool": "optomech",
        "version": __version__,
        "constants_codata": CODATA_VERSION,
        "internal_params": dataclasses.asdict(params),
    }


def _write_csv(path: str, header: list[str], rows, meta: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("# config: " + json.dumps(meta, sort_keys=True) + "\r\n")
        fh.write(",".join(header) + "\r\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\r\n")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return f"{float(value):.16e}"


def _cmd_point(args) -> int:
    doc, src = load_document(args.config)
    params = params_from_config(doc, src)
    result = evaluate_point(params)
    if args.dump_model:
        from .dynamics import build_model
        from .parameters import solve_steady_state as _solve
        model = build_model(params, _solve(params))
        with open(args.dump_model, "w") as fh:
            json.dump(model.to_document(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    out = {"metadata": _metadata(params),
           "result": dataclasses.asdict(result)}
    text = json.dumps(out, indent=1, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.recipe:
        grid = tuple(int(g) for g in args.grid.split("x")) if args.grid else (80, 80)
        spec = figure_recipe(args.recipe, grid=grid)
    elif args.config:
        doc, src = load_document(args.config)
        spec = sweep_from_config(doc, src)
    else:
        raise ConfigError("sweep needs --recipe or --config")
    result = run_sweep(spec, n_jobs=args.jobs)
    stem = args.stem or spec.recipe or "sweep"
    os.makedirs(args.out_dir, exist_ok=True)
    emit_figure_data(result, args.out_dir, stem=stem)
    result.write_json(os.path.join(args.out_dir, f"{stem}.json"))
    print(f"wrote {stem}.csv, {stem}.grid.txt, {stem}.json in {args.out_dir}"
          f" ({result.n_failures} failed points)")
    return EXIT_PARTIAL if result.n_failures else EXIT_OK


SPECTRUM_KEYS = ("omega_count", "omega_max_over_omega_m", "tau_count",
                 "tau_max_s")
VALIDATE_KEYS = ("dt_s", "n_steps", "n_ensemble", "seed", "burn_in",
                 "segments_per_member")


def _cmd_spectrum(args) -> int:
    doc, src = load_document(args.config)
    params = extract_params(doc, src, allowed_extra=SPECTRUM_KEYS)
    n_omega = int(doc.get("omega_count", 1000))
    omega_max = float(doc.get("omega_max_over_omega_m", 3.0)) * params.omega_m
    n_tau = int(doc.get("tau_count", 101))
    gamma_l = params.phase_noise.gamma_l
    tau_max = float(doc.get("tau_max_s", 5.0 / gamma_l if gamma_l else 1e-3))
    os.makedirs(args.out_dir, exist_ok=True)
    meta = _metadata(params)

    omegas = np.linspace(0.0, omega_max, n_omega)
    s_vals = phase_noise_spectrum(params.phase_noise, omegas)
    _write_csv(os.path.join(args.out_dir, "frequency_noise_spectrum.csv"),
               ["omega_rad_s", "s_phidot_rad_s"],
               zip(omegas, np.atleast_1d(s_vals)), meta)

    ss = solve_steady_state(params)
    response = effective_response(params, ss)
    chi2 = np.abs(response.chi_eff(omegas)) ** 2
    _write_csv(os.path.join(args.out_dir, "effective_susceptibility.csv"),
               ["omega_rad_s", "abs_chi_eff_squared"],
               zip(omegas, chi2), meta)

    taus = np.linspace(0.0, tau_max, n_tau)
    corr = [laser_correlation(params.phase_noise, t) for t in taus]
    _write_csv(os.path.join(args.out_dir, "laser_correlation.csv"),
               ["tau_s", "correlation"], zip(taus, corr), meta)
    print(f"wrote spectrum tables in {args.out_dir}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    doc, src = load_document(args.config)
    params = extract_params(doc, src, allowed_extra=VALIDATE_KEYS)
    spec = params.phase_noise
    if spec.kind != "bandpass":
        raise ConfigError(f"{args.config}: validation drives the bandpass "
                          "noise generator; set phase_noise.kind = 'bandpass'")
    a, d = auxiliary_block(spec)
    speed = float(np.max(np.abs(np.linalg.eigvals(a))))
    slowest = float(np.min(-np.linalg.eigvals(a).real))
    dt = float(doc.get("dt_s", 0.09 / speed))
    burn = int(doc.get("burn_in", math.ceil(5.0 / slowest / dt)))
    cfg = TrajectoryConfig(
        dt=dt,
        n_steps=int(doc.get("n_steps", 500_000)),
        n_ensemble=int(doc.get("n_ensemble", 16)),
        seed=int(doc.get("seed", 20240811)),
        burn_in=burn,
    )
    est = estimate_stationary_covariance(a, d, cfg)
    analytic = solve_lyapunov(a, d).matrix
    spectrum = simulate_phase_noise(
        spec, cfg, segments_per_member=int(doc.get("segments_per_member", 8)))

    rows = []
    for label, i, j in (("var_psi", 0, 0), ("var_theta", 1, 1),
                        ("cov_psi_theta", 0, 1)):
        e, se, ref = est.matrix[i, j], est.standard_errors[i, j], analytic[i, j]
        ok = abs(e - ref) <= 3.0 * se
        rows.append([label, e, se, ref, (e - ref) / se if se else None, ok])
    grid = spectrum.frequencies
    width = spec.gamma_tilde
    for label, lo, hi in (
            ("spectrum_low_band", spec.omega_band / 50.0, spec.omega_band / 10.0),
            ("spectrum_band_center", spec.omega_band - width / 4.0,
             spec.omega_band + width / 4.0)):
        e, se, ref = _band_average(spectrum, spec, grid, lo, hi)
        ok = abs(e - ref) <= 3.0 * se
        rows.append([label, e, se, ref, (e - ref) / se if se else None, ok])

    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, "validation.csv")
    meta = _metadata(params)
    meta["trajectory"] = dataclasses.asdict(cfg)
    _write_csv(path, ["quantity", "estimate", "standard_error", "analytic",
                      "z_score", "pass"], rows, meta)
    n_fail = sum(1 for r in rows if not r[-1])
    print(f"wrote {path}: {len(rows) - n_fail}/{len(rows)} checks passed")
    return EXIT_PARTIAL if n_fail else EXIT_OK


def _band_average(spectrum, spec, grid, lo: float, hi: float):
    """Estimate/error/analytic triple averaged over every other bin in a band.

    The stride keeps the averaged bins nearly independent (the window main
    lobe spans two bins); the first two bins are excluded because segment
    detrending suppresses them.
    """
    idx = np.where((grid >= lo) & (grid <= hi))[0]
    idx = idx[idx >= 2][::2]
    if idx.size == 0:
        idx = np.array([int(np.argmin(np.abs(grid - 0.5 * (lo + hi))))])
    est = float(np.mean(spectrum.values[idx]))
    se = float(np.sqrt(np.mean(spectrum.standard_errors[idx] ** 2) / idx.size))
    ref = float(np.mean(phase_noise_spectrum(spec, grid[idx])))
    return est, se, ref


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optomech",
        description="Stationary entanglement and cooling of a noisy-laser "
                    "optomechanical cavity")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate a single working point")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="write the JSON result here (default stdout)")
    p.add_argument("--dump-model", help="also write the drift/diffusion "
                                        "matrices as a JSON document")
    p.set_defaults(func=_cmd_point)

    p = sub.add_parser("sweep", help="run a 2-D parameter sweep")
    p.add_argument("--recipe", help="named recipe fig2a..fig9c")
    p.add_argument("--config", help="explicit sweep configuration")
    p.add_argument("--grid", help="override recipe grid, e.g. 40x40")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--stem", help="output file stem")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("spectrum", help="export noise spectrum, "
                                        "susceptibility and correlation tables")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("validate", help="compare the stochastic noise "
                                        "generator against analytic results")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OptomechError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
