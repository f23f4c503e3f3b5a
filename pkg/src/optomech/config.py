"""JSON configuration documents with explicit-unit field names.

Inputs carry their unit in the key (``omega_m_over_2pi_hz``,
``laser_power_mw``); everything is converted to angular internal units at
this boundary. Validation errors cite the file and line of the offending
key where it can be located.
"""

from __future__ import annotations

import json
import math
import re

from .errors import ConfigError
from .parameters import BARE, EFFECTIVE, NoiseSpec, SystemParams
from .sweep import OUTPUT_NAMES, SweepAxis, SweepSpec

TWO_PI = 2.0 * math.pi

_PARAM_KEYS = {
    "omega_m_over_2pi_hz", "omega_m_rad_s",
    "quality_factor",
    "kappa_over_2pi_hz", "kappa_over_omega_m", "kappa_rad_s",
    "detuning_mode",
    "delta_over_omega_m", "delta_over_2pi_hz", "delta_rad_s",
    "g0_rad_s",
    "laser_power_mw", "laser_power_w",
    "laser_wavelength_nm", "laser_wavelength_m",
    "bath_temperature_k",
    "cavity_thermal_occupancy",
    "phase_noise",
}

_NOISE_KEYS = {
    "kind", "linewidth_over_2pi_hz", "linewidth_rad_s",
    "band_center_over_2pi_hz", "band_center_rad_s",
    "bandwidth_over_2pi_hz", "bandwidth_rad_s", "bandwidth_over_band_center",
}


class _Source:
    """Locates keys in the raw document text for error messages."""

    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name

    def line_of(self, key: str) -> int | None:
        match = re.search(rf'"{re.escape(key)}"\s*:', self.text)
        if match is None:
            return None
        return self.text.count("\n", 0, match.start()) + 1

    def error(self, key: str | None, message: str) -> ConfigError:
        where = self.name
        if key is not None:
            line = self.line_of(key)
            if line is not None:
                where = f"{self.name}:{line}"
            message = f'field "{key}": {message}'
        return ConfigError(f"{where}: {message}")


def load_document(path) -> tuple[dict, _Source]:
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}: {err.msg}") from err
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top-level document must be a JSON object")
    return doc, _Source(text, str(path))


def _number(doc: dict, src: _Source, key: str) -> float:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise src.error(key, f"expected a number, got {value!r}")
    return float(value)


def _pick(doc: dict, src: _Source, keys: list[str], required: bool = True):
    present = [k for k in keys if k in doc]
    if len(present) > 1:
        raise src.error(present[1], f"conflicts with {present[0]!r}")
    if not present:
        if required:
            raise src.error(None, f"one of {keys} is required")
        return None, None
    return present[0], _number(doc, src, present[0])


def _noise_from_dict(doc: dict, src: _Source) -> NoiseSpec:
    for key in doc:
        if key not in _NOISE_KEYS:
            raise src.error(key, "unknown phase_noise field")
    kind = doc.get("kind")
    if kind not in ("none", "white", "bandpass"):
        raise src.error("kind", "must be 'none', 'white' or 'bandpass'")
    if kind == "none":
        return NoiseSpec.none()
    key, value = _pick(doc, src, ["linewidth_over_2pi_hz", "linewidth_rad_s"])
    gamma_l = value * TWO_PI if key.endswith("2pi_hz") else value
    if kind == "white":
        return NoiseSpec.white(gamma_l)
    key, value = _pick(doc, src, ["band_center_over_2pi_hz", "band_center_rad_s"])
    band = value * TWO_PI if key.endswith("2pi_hz") else value
    key, value = _pick(doc, src, ["bandwidth_over_2pi_hz", "bandwidth_rad_s",
                                  "bandwidth_over_band_center"])
    if key == "bandwidth_over_band_center":
        width = value * band
    elif key.endswith("2pi_hz"):
        width = value * TWO_PI
    else:
        width = value
    return NoiseSpec.bandpass(gamma_l, band, width)


def params_from_config(doc: dict, src: _Source) -> SystemParams:
    """Build SystemParams from a unit-suffixed document."""
    if "internal_params" in doc:
        return params_from_internal(doc["internal_params"], src)
    for key in doc:
        if key not in _PARAM_KEYS:
            raise src.error(key, "unknown parameter field")

    key, value = _pick(doc, src, ["omega_m_over_2pi_hz", "omega_m_rad_s"])
    omega_m = value * TWO_PI if key.endswith("2pi_hz") else value

    if "quality_factor" not in doc:
        raise src.error(None, 'field "quality_factor" is required')
    quality = _number(doc, src, "quality_factor")

    key, value = _pick(doc, src, ["kappa_over_2pi_hz", "kappa_over_omega_m",
                                  "kappa_rad_s"])
    kappa = {"kappa_over_2pi_hz": value * TWO_PI,
             "kappa_over_omega_m": value * omega_m,
             "kappa_rad_s": value}[key]

    mode = doc.get("detuning_mode", EFFECTIVE)
    if mode not in (EFFECTIVE, BARE):
        raise src.error("detuning_mode", f"must be '{EFFECTIVE}' or '{BARE}'")
    key, value = _pick(doc, src, ["delta_over_omega_m", "delta_over_2pi_hz",
                                  "delta_rad_s"])
    detuning = {"delta_over_omega_m": value * omega_m,
                "delta_over_2pi_hz": value * TWO_PI,
                "delta_rad_s": value}[key]

    if "g0_rad_s" not in doc:
        raise src.error(None, 'field "g0_rad_s" is required')
    g0 = _number(doc, src, "g0_rad_s")

    key, value = _pick(doc, src, ["laser_power_mw", "laser_power_w"])
    power = value * 1e-3 if key == "laser_power_mw" else value

    key, value = _pick(doc, src, ["laser_wavelength_nm", "laser_wavelength_m"],
                       required=False)
    if key is None:
        wavelength = 810e-9
    else:
        wavelength = value * 1e-9 if key == "laser_wavelength_nm" else value

    if "bath_temperature_k" not in doc:
        raise src.error(None, 'field "bath_temperature_k" is required')
    temperature = _number(doc, src, "bath_temperature_k")

    noise_doc = doc.get("phase_noise", {"kind": "none"})
    if not isinstance(noise_doc, dict):
        raise src.error("phase_noise", "must be an object")
    noise = _noise_from_dict(noise_doc, src)

    occupancy = doc.get("cavity_thermal_occupancy", 0.0)
    if "cavity_thermal_occupancy" in doc:
        occupancy = _number(doc, src, "cavity_thermal_occupancy")

    try:
        return SystemParams(
            omega_m=omega_m, quality_factor=quality, kappa=kappa,
            detuning=detuning, g0=g0, laser_power=power,
            laser_wavelength=wavelength, bath_temperature=temperature,
            phase_noise=noise, cavity_thermal_occupancy=occupancy,
            detuning_mode=mode)
    except ValueError as err:
        raise src.error(None, str(err)) from err


def params_from_internal(doc: dict, src: _Source) -> SystemParams:
    """Rebuild SystemParams from the resolved metadata emitted with results."""
    try:
        noise = NoiseSpec(**doc["phase_noise"])
        fields = {k: v for k, v in doc.items() if k != "phase_noise"}
        return SystemParams(phase_noise=noise, **fields)
    except (KeyError, TypeError, ValueError) as err:
        raise src.error("internal_params", str(err)) from err


def extract_params(doc: dict, src: _Source, allowed_extra=()) -> SystemParams:
    """Parameters from a document that may also carry run-control fields.

    Accepts either a nested "params" object or parameter keys at top level
    alongside the ``allowed_extra`` keys of the surrounding command.
    """
    if "params" in doc:
        sub = doc["params"]
        if not isinstance(sub, dict):
            raise src.error("params", "must be an object")
        extra = set(doc) - {"params"} - set(allowed_extra)
        if extra:
            raise src.error(sorted(extra)[0], "unknown field")
        return params_from_config(sub, src)
    sub = {k: v for k, v in doc.items()
           if k in _PARAM_KEYS or k == "internal_params"}
    extra = set(doc) - set(sub) - set(allowed_extra)
    if extra:
        raise src.error(sorted(extra)[0], "unknown field")
    return params_from_config(sub, src)


def sweep_from_config(doc: dict, src: _Source) -> SweepSpec:
    """Sweep specification: a named recipe or explicit axes over fixed params."""
    from .sweep import figure_recipe

    if "recipe" in doc:
        grid = doc.get("grid", [80, 80])
        if (not isinstance(grid, list) or len(grid) != 2
                or not all(isinstance(g, int) and g >= 2 for g in grid)):
            raise src.error("grid", "must be a [count_x, count_y] pair of ints >= 2")
        try:
            return figure_recipe(doc["recipe"], grid=tuple(grid))
        except ValueError as err:
            raise src.error("recipe", str(err)) from err

    for key in ("axis_x", "axis_y", "fixed"):
        if key not in doc:
            raise src.error(None, f'field "{key}" is required (or use "recipe")')
    axes = []
    for key in ("axis_x", "axis_y"):
        axis_doc = doc[key]
        if not isinstance(axis_doc, dict):
            raise src.error(key, "must be an object")
        unknown = set(axis_doc) - {"name", "min", "max", "count", "scale"}
        if unknown:
            raise src.error(sorted(unknown)[0], "unknown axis field")
        try:
            axes.append(SweepAxis(
                name=axis_doc.get("name"),
                minimum=float(axis_doc["min"]), maximum=float(axis_doc["max"]),
                count=int(axis_doc["count"]),
                scale=axis_doc.get("scale", "linear")))
        except (KeyError, TypeError, ValueError) as err:
            raise src.error(key, str(err)) from err
    fixed = params_from_config(doc["fixed"], src)
    outputs = tuple(doc.get("outputs", OUTPUT_NAMES))
    try:
        return SweepSpec(axis_x=axes[0], axis_y=axes[1], fixed=fixed,
                         outputs=outputs)
    except ValueError as err:
        raise src.error(None, str(err)) from err
