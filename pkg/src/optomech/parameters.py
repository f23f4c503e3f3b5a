"""Physical parameters, derived quantities, and the classical working point.

All frequencies and rates are stored as angular quantities (rad/s); any
"/2pi" input convention is converted at the boundary (see optomech.config).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import C_LIGHT, HBAR, K_B
from .errors import NoPhysicalRoot

EFFECTIVE = "effective"
BARE = "bare"

_BRANCHES = ("lower", "middle", "upper")


@dataclass(frozen=True)
class NoiseSpec:
    """Laser frequency-noise model: none, flat (white), or bandpass.

    White noise of strength ``gamma_l`` has the flat spectrum 2*gamma_l.
    The bandpass variant is peaked at ``omega_band`` with width
    ``gamma_tilde`` and reduces to the white case as both grow large.
    """

    kind: str  # "none" | "white" | "bandpass"
    gamma_l: float = 0.0  # laser linewidth, rad/s
    omega_band: float = 0.0  # band center, rad/s
    gamma_tilde: float = 0.0  # bandwidth, rad/s

    def __post_init__(self):
        if self.kind not in ("none", "white", "bandpass"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.gamma_l < 0:
            raise ValueError("noise strength gamma_l must be >= 0")
        if self.kind == "bandpass":
            if self.omega_band <= 0:
                raise ValueError("bandpass noise requires omega_band > 0")
            if self.gamma_tilde < 0:
                raise ValueError("bandpass noise requires gamma_tilde >= 0")

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls(kind="none")

    @classmethod
    def white(cls, gamma_l: float) -> "NoiseSpec":
        return cls(kind="white", gamma_l=gamma_l)

    @classmethod
    def bandpass(cls, gamma_l: float, omega_band: float, gamma_tilde: float) -> "NoiseSpec":
        return cls(kind="bandpass", gamma_l=gamma_l, omega_band=omega_band,
                   gamma_tilde=gamma_tilde)


@dataclass(frozen=True)
class SystemParams:
    """All physical inputs of the driven cavity, in coherent internal units.

    Parameters
    ----------
    omega_m:
        Mechanical angular frequency, rad/s.
    quality_factor:
        Mechanical quality factor; the damping rate is
        ``gamma_m = omega_m / quality_factor``.
    kappa:
        Cavity amplitude decay rate, rad/s.
    detuning:
        Cavity-laser detuning, rad/s; its meaning is set by ``detuning_mode``:
        "effective" (radiation-pressure-shifted) or "bare".
    g0:
        Single-photon optomechanical coupling, rad/s.
    laser_power:
        Input laser power, W.
    laser_wavelength:
        Drive wavelength, m (sets the photon energy of the drive).
    bath_temperature:
        Mechanical bath temperature, K.
    phase_noise:
        Laser frequency-noise model.
    cavity_thermal_occupancy:
        Thermal photon number of the optical bath (0 at optical frequencies).
    """

    omega_m: float
    quality_factor: float
    kappa: float
    detuning: float
    g0: float
    laser_power: float
    laser_wavelength: float
    bath_temperature: float
    phase_noise: NoiseSpec = NoiseSpec.none()
    cavity_thermal_occupancy: float = 0.0
    detuning_mode: str = EFFECTIVE

    def __post_init__(self):
        for name in ("omega_m", "quality_factor", "kappa", "laser_wavelength"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("g0", "laser_power", "bath_temperature", "cavity_thermal_occupancy"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.detuning_mode not in (EFFECTIVE, BARE):
            raise ValueError(f"detuning_mode must be '{EFFECTIVE}' or '{BARE}'")

    @property
    def gamma_m(self) -> float:
        """Mechanical damping rate omega_m / Q, rad/s."""
        return self.omega_m / self.quality_factor

    @property
    def omega_laser(self) -> float:
        """Drive angular frequency 2*pi*c / wavelength, rad/s."""
        return 2.0 * math.pi * C_LIGHT / self.laser_wavelength

    def thermal_phonons(self) -> float:
        """Mean bath phonon number at the mechanical frequency."""
        return thermal_occupancy(self.omega_m, self.bath_temperature)

    def with_(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


@dataclass(frozen=True)
class SteadyState:
    """Classical working point of the driven cavity.

    ``all_roots`` lists every admissible intracavity intensity |alpha_s|^2
    of the static cubic (ascending); ``branch`` records which one was taken.
    """

    alpha_abs: float  # |alpha_s|
    photon_number: float  # |alpha_s|^2
    delta_eff: float  # effective detuning, rad/s
    delta_bare: float  # bare detuning, rad/s
    q_static: float  # static mechanical displacement, dimensionless
    g_eff: float  # field-enhanced coupling G = g0*sqrt(2)*|alpha_s|, rad/s
    branch: str  # "monostable" | "lower" | "middle" | "upper"
    all_roots: tuple[float, ...]


def thermal_occupancy(omega: float, temperature: float) -> float:
    """Bose-Einstein occupancy 1/(exp(hbar*omega/kB*T) - 1).

    Returns 0 in the zero-temperature limit.
    """
    if omega <= 0:
        raise ValueError("omega must be > 0")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (K_B * temperature)
    return 1.0 / math.expm1(x)


def drive_amplitude(params: SystemParams) -> float:
    """Coherent drive amplitude sqrt(2*kappa*P/(hbar*omega_laser)), 1/s."""
    return math.sqrt(2.0 * params.kappa * params.laser_power
                     / (HBAR * params.omega_laser))


def _steady_cubic_coeffs(params: SystemParams, e0_sq: float) -> np.ndarray:
    """Coefficients of the intensity cubic in I = |alpha_s|^2 (highest first).

    beta^2 I^3 - 2*delta0*beta I^2 + (kappa^2 + delta0^2) I - E0^2 = 0,
    with beta = g0^2/omega_m and delta0 the bare detuning.
    """
    beta = params.g0 ** 2 / params.omega_m
    delta0 = params.detuning
    return np.array([beta ** 2, -2.0 * delta0 * beta,
                     params.kappa ** 2 + delta0 ** 2, -e0_sq])


def _cubic_residual(params: SystemParams, intensity: float, e0_sq: float) -> float:
    beta = params.g0 ** 2 / params.omega_m
    delta = params.detuning - beta * intensity
    return intensity * (params.kappa ** 2 + delta ** 2) - e0_sq


def _polish_root(params: SystemParams, intensity: float, e0_sq: float) -> float:
    """A few Newton steps on the cubic residual; keeps the best iterate."""
    coeffs = _steady_cubic_coeffs(params, e0_sq)
    deriv = np.polyder(coeffs)
    best, best_res = intensity, abs(_cubic_residual(params, intensity, e0_sq))
    x = intensity
    for _ in range(3):
        slope = np.polyval(deriv, x)
        if slope == 0.0:
            break
        x = x - np.polyval(coeffs, x) / slope
        res = abs(_cubic_residual(params, x, e0_sq))
        if res < best_res and x >= 0:
            best, best_res = x, res
    return float(best)


def _admissible_intensities(params: SystemParams, e0_sq: float) -> list[float]:
    """Nonnegative real roots of the intensity cubic, ascending."""
    if params.g0 == 0.0:
        return [e0_sq / (params.kappa ** 2 + params.detuning ** 2)]
    coeffs = _steady_cubic_coeffs(params, e0_sq)
    scale = max(e0_sq / (params.kappa ** 2 + params.detuning ** 2), 1.0)
    roots = np.roots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) > 1e-8 * max(abs(r), scale):
            continue
        x = max(r.real, 0.0)
        if r.real < -1e-8 * scale:
            continue
        out.append(_polish_root(params, x, e0_sq))
    out.sort()
    return out


def solve_steady_state(params: SystemParams, branch: str = "lower") -> SteadyState:
    """Solve the classical steady state of the driven cavity.

    In "effective" detuning mode the intensity follows in closed form and
    the bare detuning is backed out; in "bare" mode the static cubic is
    solved and a root is selected by ``branch`` ("lower", "middle", or
    "upper"; ignored when the cubic is monostable).
    """
    if branch not in _BRANCHES:
        raise ValueError(f"branch must be one of {_BRANCHES}")
    e0 = drive_amplitude(params)
    e0_sq = e0 * e0
    beta = params.g0 ** 2 / params.omega_m

    if params.detuning_mode == EFFECTIVE:
        delta = params.detuning
        intensity = e0_sq / (params.kappa ** 2 + delta ** 2)
        delta0 = delta + beta * intensity
        bare = params.with_(detuning=delta0, detuning_mode=BARE)
        roots = _admissible_intensities(bare, e0_sq)
        # classify which branch of the recovered cubic the point sits on
        idx = int(np.argmin([abs(r - intensity) for r in roots])) if roots else 0
    else:
        delta0 = params.detuning
        roots = _admissible_intensities(params, e0_sq)
        if not roots:
            # cannot occur for a real nonnegative drive: the cubic is
            # negative at I=0 and grows without bound
            raise NoPhysicalRoot("intensity cubic produced no admissible root")
        if len(roots) >= 3:
            idx = {"lower": 0, "middle": 1, "upper": len(roots) - 1}[branch]
        else:
            idx = 0
        intensity = roots[idx]
        delta = delta0 - beta * intensity

    tag = "monostable" if len(roots) <= 1 else _BRANCHES[min(idx, 2)]
    alpha_abs = math.sqrt(intensity)
    return SteadyState(
        alpha_abs=alpha_abs,
        photon_number=intensity,
        delta_eff=delta,
        delta_bare=delta0,
        q_static=params.g0 * intensity / params.omega_m,
        g_eff=params.g0 * math.sqrt(2.0) * alpha_abs,
        branch=tag,
        all_roots=tuple(roots),
    )


def power_for_coupling(params: SystemParams, g_target: float) -> float:
    """Input power that realizes a field-enhanced coupling ``g_target``.

    Valid in effective-detuning mode, where |alpha_s| depends on power
    in closed form.
    """
    if params.detuning_mode != EFFECTIVE:
        raise ValueError("power_for_coupling requires effective detuning mode")
    if params.g0 <= 0:
        raise ValueError("power_for_coupling requires g0 > 0")
    alpha_abs = g_target / (params.g0 * math.sqrt(2.0))
    e0_sq = alpha_abs ** 2 * (params.kappa ** 2 + params.detuning ** 2)
    return e0_sq * HBAR * params.omega_laser / (2.0 * params.kappa)
