"""Point evaluation and 2-D parameter sweeps with reproducible outputs.

Grids follow the contour-plot recipes of the source study: input power
against normalized detuning or cavity linewidth, at fixed noise settings.
Unstable grid points carry explicit nulls for the state-dependent outputs,
never zeros.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__
from .constants import CODATA_VERSION
from .dynamics import build_model, stability_margin
from .errors import NonpositiveDetuning, PointEvaluationError
from .lyapunov import (reduce_to_optomechanical, solve_lyapunov,
                       symplectic_eigenvalues)
from .measures import log_negativity, occupancy
from .parameters import EFFECTIVE, NoiseSpec, SystemParams, solve_steady_state
from .spectral import approx_n_eff

AXIS_NAMES = ("power_mw", "delta_over_omega_m", "kappa_over_omega_m")
OUTPUT_NAMES = ("e_n", "n_eff", "eta_minus", "stability_margin", "g_eff",
                "alpha_abs")
_NULLABLE = ("e_n", "n_eff", "eta_minus")


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis: which knob, its range, grid size, and spacing."""

    name: str
    minimum: float
    maximum: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis name must be one of {AXIS_NAMES}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not self.minimum < self.maximum:
            raise ValueError("axis requires minimum < maximum")
        if self.scale not in ("linear", "log"):
            raise ValueError("axis scale must be 'linear' or 'log'")
        if self.scale == "log" and self.minimum <= 0:
            raise ValueError("log axis requires minimum > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Two distinct axes, the fixed parameter set, and requested outputs."""

    axis_x: SweepAxis
    axis_y: SweepAxis
    fixed: SystemParams
    outputs: tuple[str, ...] = OUTPUT_NAMES
    recipe: str | None = None

    def __post_init__(self):
        if self.axis_x.name == self.axis_y.name:
            raise ValueError("sweep axes must be distinct")
        if not self.outputs:
            raise ValueError(f"no outputs requested; valid outputs: {OUTPUT_NAMES}")
        bad = [o for o in self.outputs if o not in OUTPUT_NAMES]
        if bad:
            raise ValueError(f"unknown outputs {bad}; valid outputs: {OUTPUT_NAMES}")


@dataclass(frozen=True)
class PointResult:
    """Everything evaluate_point knows about one working point."""

    stable: bool
    stability_margin: float | None
    alpha_abs: float
    photon_number: float
    g_eff: float
    branch: str
    e_n: float | None = None
    eta_minus: float | None = None
    raw_log_negativity: float | None = None
    n_eff: float | None = None
    n_eff_approx: float | None = None
    energy_j: float | None = None
    heisenberg_min: float | None = None
    error: str | None = None

    def output(self, name: str) -> float | None:
        if name not in OUTPUT_NAMES:
            raise ValueError(f"unknown output {name!r}")
        return getattr(self, name)


def apply_axis(params: SystemParams, name: str, value: float) -> SystemParams:
    """Return the parameter set with one sweep knob applied."""
    if name == "power_mw":
        return params.with_(laser_power=value * 1e-3)
    if name == "delta_over_omega_m":
        return params.with_(detuning=value * params.omega_m,
                            detuning_mode=EFFECTIVE)
    if name == "kappa_over_omega_m":
        return params.with_(kappa=value * params.omega_m)
    raise ValueError(f"unknown axis {name!r}")


def _stage(name: str, func, *args):
    try:
        return func(*args)
    except Exception as err:
        raise PointEvaluationError(name, str(err)) from err


def evaluate_point(params: SystemParams) -> PointResult:
    """Full pipeline at one working point.

    Unstable points return stability data only, with null measures.
    """
    ss = _stage("steady-state", solve_steady_state, params)
    model = _stage("linear-model", build_model, params, ss)
    try:
        margin = stability_margin(params, ss)
    except NonpositiveDetuning:
        margin = None
    base = dict(stable=model.stable, stability_margin=margin,
                alpha_abs=ss.alpha_abs, photon_number=ss.photon_number,
                g_eff=ss.g_eff, branch=ss.branch)
    if not model.stable:
        return PointResult(**base)

    cov = _stage("lyapunov", solve_lyapunov, model.drift, model.diffusion)
    if cov.order == 6:
        cov = reduce_to_optomechanical(cov)
    ent = _stage("log-negativity", log_negativity, cov)
    occ = _stage("occupancy", occupancy, cov, params.omega_m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        approx = _stage("approx-occupancy", approx_n_eff, params, ss)
    return PointResult(
        **base,
        e_n=ent.log_negativity,
        eta_minus=ent.eta_minus,
        raw_log_negativity=ent.raw_log_negativity,
        n_eff=occ.n_eff,
        n_eff_approx=approx,
        energy_j=occ.energy,
        heisenberg_min=float(np.min(symplectic_eigenvalues(cov.matrix))),
    )


@dataclass(frozen=True)
class SweepResult:
    """Row-major (x outer, y inner) grid of point results plus metadata."""

    spec: SweepSpec
    x_values: np.ndarray
    y_values: np.ndarray
    points: tuple[PointResult, ...]
    metadata: dict

    @property
    def n_failures(self) -> int:
        return sum(1 for p in self.points if p.error is not None)

    def grid(self, output: str) -> np.ndarray:
        """Output as a (count_x, count_y) float array, NaN where null."""
        vals = [np.nan if p.output(output) is None else p.output(output)
                for p in self.points]
        return np.array(vals).reshape(len(self.x_values), len(self.y_values))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("# config: " + json.dumps(self.metadata, sort_keys=True)
                     + "\r\n")
            header = ([self.spec.axis_x.name, self.spec.axis_y.name]
                      + list(self.spec.outputs) + ["stable", "branch", "error"])
            fh.write(",".join(header) + "\r\n")
            for (x, y), p in zip(self._xy_pairs(), self.points):
                cells = [_fmt(x), _fmt(y)]
                cells += [_fmt(p.output(name)) for name in self.spec.outputs]
                cells += ["true" if p.stable else "false", p.branch,
                          p.error or ""]
                fh.write(",".join(cells) + "\r\n")

    def write_json(self, path) -> None:
        doc = {
            "metadata": self.metadata,
            "x_values": [float(v) for v in self.x_values],
            "y_values": [float(v) for v in self.y_values],
            "rows": [dataclasses.asdict(p) for p in self.points],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")

    def write_grid(self, path, output: str) -> None:
        """Gnuplot-style matrix: x y z rows, blank line between x-blocks."""
        if output not in self.spec.outputs:
            raise ValueError(f"output {output!r} not in {self.spec.outputs}")
        with open(path, "w") as fh:
            fh.write("# config: " + json.dumps(self.metadata, sort_keys=True)
                     + "\n")
            fh.write(f"# columns: {self.spec.axis_x.name} "
                     f"{self.spec.axis_y.name} {output}\n")
            grid = self.grid(output)
            for i, x in enumerate(self.x_values):
                for j, y in enumerate(self.y_values):
                    fh.write(f"{_fmt(x)} {_fmt(y)} {_fmt(grid[i, j])}\n")
                fh.write("\n")

    def _xy_pairs(self):
        for x in self.x_values:
            for y in self.y_values:
                yield x, y


def _fmt(value) -> str:
    if value is None:
        return ""
    v = float(value)
    if math.isnan(v):
        return "nan"
    return f"{v:.16e}"


def _evaluate_column(args) -> list[PointResult]:
    spec, x = args
    out = []
    for y in spec.axis_y.values():
        params = apply_axis(apply_axis(spec.fixed, spec.axis_x.name, x),
                            spec.axis_y.name, y)
        try:
            out.append(evaluate_point(params))
        except PointEvaluationError as err:
            out.append(PointResult(stable=False, stability_margin=None,
                                   alpha_abs=np.nan, photon_number=np.nan,
                                   g_eff=np.nan, branch="error",
                                   error=str(err)))
    return out


def run_sweep(spec: SweepSpec, n_jobs: int = 1) -> SweepResult:
    """Evaluate the grid (optionally in parallel); row order is deterministic.

    Per-point failures are recorded on the row and the run continues.
    """
    xs = spec.axis_x.values()
    ys = spec.axis_y.values()
    tasks = [(spec, float(x)) for x in xs]
    if n_jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=n_jobs) as pool:
            columns = list(pool.map(_evaluate_column, tasks))
    else:
        columns = [_evaluate_column(t) for t in tasks]
    points = tuple(p for col in columns for p in col)
    metadata = {
        "tool": "optomech",
        "version": __version__,
        "constants_codata": CODATA_VERSION,
        "recipe": spec.recipe,
        "branch_policy": "lower",
        "axis_x": dataclasses.asdict(spec.axis_x),
        "axis_y": dataclasses.asdict(spec.axis_y),
        "outputs": list(spec.outputs),
        "fixed_params": dataclasses.asdict(spec.fixed),
    }
    return SweepResult(spec=spec, x_values=xs, y_values=ys, points=points,
                       metadata=metadata)


# named grid recipes matching the contour plots of the source study
_GAMMA_L_TRIPLET = (0.0, 2.0 * math.pi * 100.0, 2.0 * math.pi * 1000.0)
_OMEGA_TRIPLET = tuple(2.0 * math.pi * v for v in (30e3, 80e3, 140e3))
_OMEGA_DEFAULT = 2.0 * math.pi * 50e3

_FIGURES = {
    # fig: (y-axis, kappa/omega_m, gamma_l per letter, omega_band per letter, primary)
    "fig2": ("delta_over_omega_m", 0.5, _GAMMA_L_TRIPLET, None, "e_n"),
    "fig3": ("kappa_over_omega_m", None, _GAMMA_L_TRIPLET, None, "e_n"),
    "fig4": ("delta_over_omega_m", 0.5, None, _OMEGA_TRIPLET, "e_n"),
    "fig5": ("kappa_over_omega_m", None, None, _OMEGA_TRIPLET, "e_n"),
    "fig6": ("delta_over_omega_m", 1.0, _GAMMA_L_TRIPLET, None, "n_eff"),
    "fig7": ("kappa_over_omega_m", None, _GAMMA_L_TRIPLET, None, "n_eff"),
    "fig8": ("delta_over_omega_m", 1.0, None, _OMEGA_TRIPLET, "n_eff"),
    "fig9": ("kappa_over_omega_m", None, None, _OMEGA_TRIPLET, "n_eff"),
}

_AXIS_RANGES = {
    "power_mw": (1.0, 50.0),
    "delta_over_omega_m": (0.25, 2.0),
    "kappa_over_omega_m": (0.1, 2.0),
}


def default_fixed_params() -> SystemParams:
    """Shared fixed parameters of all figure recipes."""
    omega_m = 2.0 * math.pi * 1e7
    return SystemParams(
        omega_m=omega_m,
        quality_factor=2e6,
        kappa=0.5 * omega_m,
        detuning=omega_m,
        g0=1e3,
        laser_power=20e-3,
        laser_wavelength=810e-9,
        bath_temperature=0.4,
        phase_noise=NoiseSpec.none(),
        detuning_mode=EFFECTIVE,
    )


def figure_recipe(fig_id: str, grid: tuple[int, int] = (80, 80)) -> SweepSpec:
    """Named sweep recipe fig2a ... fig9c.

    Letters a/b/c select the laser linewidth (0, 0.1, 1 kHz cyclic) for
    figures 2/3/6/7 and the noise band center (30, 80, 140 kHz cyclic) for
    figures 4/5/8/9; ``grid`` overrides the (count_x, count_y) resolution.
    """
    fig, letter = fig_id[:-1], fig_id[-1]
    if fig not in _FIGURES or letter not in "abc":
        raise ValueError(f"unknown recipe {fig_id!r}; valid: "
                         + ", ".join(f"{f}{c}" for f in _FIGURES for c in "abc"))
    y_name, kappa_ratio, gammas, bands, primary = _FIGURES[fig]
    idx = "abc".index(letter)
    gamma_l = gammas[idx] if gammas else 2.0 * math.pi * 100.0
    band = bands[idx] if bands else _OMEGA_DEFAULT
    noise = (NoiseSpec.none() if gamma_l == 0.0
             else NoiseSpec.bandpass(gamma_l, band, band / 2.0))
    fixed = default_fixed_params().with_(phase_noise=noise)
    if kappa_ratio is not None:
        fixed = fixed.with_(kappa=kappa_ratio * fixed.omega_m)
    lo_x, hi_x = _AXIS_RANGES["power_mw"]
    lo_y, hi_y = _AXIS_RANGES[y_name]
    outputs = (primary,) + tuple(o for o in OUTPUT_NAMES if o != primary)
    return SweepSpec(
        axis_x=SweepAxis("power_mw", lo_x, hi_x, grid[0]),
        axis_y=SweepAxis(y_name, lo_y, hi_y, grid[1]),
        fixed=fixed,
        outputs=outputs,
        recipe=fig_id,
    )


def emit_figure_data(result: SweepResult, out_dir, stem: str | None = None,
                     output: str | None = None) -> list[str]:
    """Write the long CSV and the gnuplot grid file for one sweep.

    Returns the written paths; identical inputs produce byte-identical files.
    """
    import os

    stem = stem or result.spec.recipe or "sweep"
    output = output or result.spec.outputs[0]
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    grid_path = os.path.join(out_dir, f"{stem}.grid.txt")
    result.write_csv(csv_path)
    result.write_grid(grid_path, output)
    return [csv_path, grid_path]
