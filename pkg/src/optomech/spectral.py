"""Frequency-domain oracle and closed-form approximations.

Everything here reaches the stationary state through spectra instead of the
Lyapunov equation, providing an independent cross-check of the time-domain
solvers plus the compact analytic expressions for entanglement at threshold
and for sideband cooling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.integrate

from .dynamics import REDUCED_BASIS, optomechanical_block, phase_noise_spectrum
from .errors import ImaginaryFrequency, QuadratureNotConverged, UnstableDrift
from .lyapunov import CovarianceMatrix
from .parameters import NoiseSpec, SteadyState, SystemParams
from .quadrature import integrate_adaptive


@dataclass(frozen=True)
class EffectiveResponse:
    """Radiation-pressure-modified mechanical response.

    ``chi_eff`` evaluates the effective susceptibility at angular frequency
    omega (scalar or array); ``omega_eff``/``gamma_eff`` are the closed-form
    resonance frequency (optical spring) and linewidth.
    """

    omega_eff: float
    gamma_eff: float
    chi_eff: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScatteringRates:
    """Stokes/anti-Stokes photon scattering rates and their difference."""

    a_plus: float
    a_minus: float
    gamma_op: float


def _sideband_denominators(params: SystemParams, ss: SteadyState) -> tuple[float, float]:
    k2 = params.kappa ** 2
    return (k2 + (ss.delta_eff - params.omega_m) ** 2,
            k2 + (ss.delta_eff + params.omega_m) ** 2)


def scattering_rates(params: SystemParams, ss: SteadyState) -> ScatteringRates:
    """Rates kappa*G^2/2 / (kappa^2 + (delta +/- omega_m)^2)."""
    d_minus, d_plus = _sideband_denominators(params, ss)
    half = 0.5 * params.kappa * ss.g_eff ** 2
    a_minus = half / d_minus
    a_plus = half / d_plus
    return ScatteringRates(a_plus=a_plus, a_minus=a_minus, gamma_op=a_minus - a_plus)


def effective_response(params: SystemParams, ss: SteadyState) -> EffectiveResponse:
    """Optical-spring frequency, effective damping, and chi_eff(omega).

    Raises ImaginaryFrequency when the squared effective frequency turns
    negative (working point at or past the static instability).
    """
    wm, gm, k = params.omega_m, params.gamma_m, params.kappa
    g, delta = ss.g_eff, ss.delta_eff
    d_minus, d_plus = _sideband_denominators(params, ss)
    radicand = wm ** 2 - (g ** 2 * delta * wm * (k ** 2 - wm ** 2 + delta ** 2)
                          / (d_minus * d_plus))
    if radicand < 0:
        raise ImaginaryFrequency(radicand)
    gamma_eff = gm + 2.0 * g ** 2 * delta * wm * k / (d_minus * d_plus)

    def chi_eff(omega):
        w = np.asarray(omega, dtype=complex)
        out = 1.0 / (wm ** 2 - w ** 2 - 1j * gm * w
                     - g ** 2 * delta * wm / ((k - 1j * w) ** 2 + delta ** 2))
        return out if out.ndim else complex(out)

    return EffectiveResponse(omega_eff=math.sqrt(radicand), gamma_eff=gamma_eff,
                             chi_eff=chi_eff)


def _phase_coupling_vector(params: SystemParams, ss: SteadyState,
                           omega: np.ndarray) -> np.ndarray:
    """Response vector of (dq, dp, dX, dY) to the frequency-noise drive."""
    wm, gm, k = params.omega_m, params.gamma_m, params.kappa
    g, delta = ss.g_eff, ss.delta_eff
    bare = wm ** 2 - omega ** 2 - 1j * gm * omega
    return np.stack([
        np.full_like(bare, g * delta * wm),
        -1j * omega * g * delta,
        delta * bare,
        (k - 1j * omega) * bare,
    ], axis=-1)


def _noise_free_integrand(a4: np.ndarray, d4_diag: np.ndarray,
                          omega: np.ndarray) -> np.ndarray:
    """Resolvent spectrum T(w) D T(w)^dag with T = (i w I - A)^-1."""
    eye = np.eye(4)
    t = np.linalg.inv(1j * omega[:, None, None] * eye - a4[None, :, :])
    return (t * d4_diag[None, None, :]) @ t.conj().transpose(0, 2, 1)


def _vacuum_diffusion_diag(params: SystemParams) -> np.ndarray:
    """Thermal/vacuum diffusion of (dq, dp, dX, dY), phase noise excluded."""
    n = params.thermal_phonons()
    k2n1 = params.kappa * (2.0 * params.cavity_thermal_occupancy + 1.0)
    return np.array([0.0, params.gamma_m * (2.0 * n + 1.0), k2n1, k2n1])


def _feature_breakpoints(params: SystemParams, ss: SteadyState,
                         cutoff: float, extra=()) -> np.ndarray:
    """Quadrature seeds: windows around every resonance at its own width."""
    pts = {0.0, cutoff}
    features = []
    a4 = optomechanical_block(params, ss)
    for lam in np.linalg.eigvals(a4):
        features.append((abs(lam.imag), max(abs(lam.real), 1e-9 * params.omega_m)))
    spec = params.phase_noise
    if spec.kind == "bandpass":
        width = max(spec.gamma_tilde, 1e-9 * spec.omega_band)
        features.append((spec.omega_band, width))
    for center, width in features:
        pts.add(min(center, cutoff))
        for k in (1.0, 4.0, 16.0, 64.0, 256.0, 1024.0):
            for side in (center - k * width, center + k * width):
                if 0.0 < side < cutoff:
                    pts.add(side)
    for p in extra:
        if 0.0 <= p < cutoff:
            pts.add(float(p))
    return np.array(sorted(pts))


def _integrate_cm(params: SystemParams, ss: SteadyState,
                  spectrum_at: Callable[[np.ndarray], np.ndarray],
                  quadrature_points, rtol: float,
                  atol: float, max_segments: int) -> tuple[np.ndarray, np.ndarray]:
    """Shared spectral integration; returns (complex CM integral, error)."""
    a4 = optomechanical_block(params, ss)
    if np.max(np.linalg.eigvals(a4).real) >= 0:
        raise UnstableDrift("spectral oracle needs a stable working point")
    d4 = _vacuum_diffusion_diag(params)
    k, delta = params.kappa, ss.delta_eff
    scale = max(params.omega_m, abs(delta), k,
                params.phase_noise.omega_band, params.phase_noise.gamma_tilde)
    cutoff = 50.0 * scale
    chi = effective_response(params, ss).chi_eff
    photon = ss.photon_number

    def integrand(omega_flat: np.ndarray) -> np.ndarray:
        # evaluate at +w and -w so hermitian symmetry cancels pointwise
        total = None
        for w in (omega_flat, -omega_flat):
            main = _noise_free_integrand(a4, d4, w)
            s_val = spectrum_at(w)
            c = _phase_coupling_vector(params, ss, w)
            denom = (k ** 2 + (w - delta) ** 2) * (k ** 2 + (w + delta) ** 2)
            coef = 2.0 * photon * np.abs(chi(w)) ** 2 * s_val / denom
            phase = coef[:, None, None] * (c[:, :, None] * c.conj()[:, None, :])
            total = main + phase if total is None else total + main + phase
        return total

    def tail_integrand(u_flat: np.ndarray) -> np.ndarray:
        # |omega| > cutoff via u = 1/omega; the transformed integrand is
        # smooth and tends to the diffusion matrix as u -> 0
        return integrand(1.0 / u_flat) / u_flat[:, None, None] ** 2

    pts = _feature_breakpoints(params, ss, cutoff, extra=quadrature_points or ())
    value, err = integrate_adaptive(integrand, pts, rtol=rtol, atol=atol,
                                    max_segments=max_segments)
    tail, tail_err = integrate_adaptive(tail_integrand,
                                        np.linspace(0.0, 1.0 / cutoff, 9),
                                        rtol=rtol, atol=atol,
                                        max_segments=max_segments)
    return (value + tail) / (2.0 * math.pi), (err + tail_err) / (2.0 * math.pi)


def cm_spectral_oracle(params: SystemParams, ss: SteadyState,
                       quadrature_points=None, *, rtol: float = 1e-9,
                       atol: float = 1e-9,
                       max_segments: int = 20000) -> CovarianceMatrix:
    """Stationary 4x4 covariance by frequency integration.

    Integrates the resolvent spectrum of the vacuum/thermal noises plus the
    frequency-noise correction (full spectrum S(omega)); independent of the
    Lyapunov route. ``quadrature_points`` seeds extra subdivision points.
    """
    spec = params.phase_noise

    def s_of(w):
        return np.asarray(phase_noise_spectrum(spec, w), dtype=float)

    value, _ = _integrate_cm(params, ss, s_of, quadrature_points,
                             rtol, atol, max_segments)
    imag_ratio = np.abs(value.imag).max() / max(np.abs(value.real).max(), 1e-300)
    if imag_ratio > 1e-10:
        raise QuadratureNotConverged(
            "hermitian symmetry violated in spectral integral",
            achieved_error=float(imag_ratio))
    return CovarianceMatrix(matrix=value.real, basis=REDUCED_BASIS)


def approx_cm_phase_correction(params: SystemParams, ss: SteadyState,
                               quadrature_points=None, *, rtol: float = 1e-9,
                               atol: float = 1e-9,
                               max_segments: int = 20000) -> CovarianceMatrix:
    """Covariance with the noise spectrum frozen at its resonance value.

    Same integral as the oracle but with S(omega) replaced by the constant
    S(omega_eff) inside the phase-noise correction; exact for flat spectra,
    accurate in the resolved-sideband regime (warns when kappa > omega_m).
    """
    if params.kappa > params.omega_m:
        warnings.warn("peak-spectrum approximation is calibrated for the "
                      "resolved-sideband regime (kappa < omega_m)",
                      stacklevel=2)
    spec = params.phase_noise
    omega_eff = effective_response(params, ss).omega_eff
    s_peak = float(phase_noise_spectrum(spec, omega_eff))

    def s_of(w):
        return np.full_like(np.asarray(w, dtype=float), s_peak)

    value, _ = _integrate_cm(params, ss, s_of, quadrature_points,
                             rtol, atol, max_segments)
    return CovarianceMatrix(matrix=value.real, basis=REDUCED_BASIS)


def threshold_eta_minus(params: SystemParams, ss_like: SteadyState,
                        s_value: float) -> float:
    """Closed-form lowest symplectic eigenvalue at the instability threshold.

    Valid for a working point driven at the threshold coupling and with
    thermal noise neglected; ``s_value`` is the frequency-noise spectrum at
    the effective mechanical resonance.
    """
    k, wm = params.kappa, params.omega_m
    delta = ss_like.delta_eff
    n_ph = ss_like.photon_number
    k2, d2, w2 = k * k, delta * delta, wm * wm
    s = s_value
    a = k ** 3 * (k2 + d2) * (4 * d2 * d2 + 4 * d2 * (k2 + w2) + w2 * w2)
    b = 2 * n_ph * d2 * k2 * (4 * (d2 + k2) * (2 * d2 + k2)
                              + 6 * (d2 + k2) * w2 + w2 * w2)
    c = 4 * n_ph ** 2 * d2 * d2 * k * (5 * (d2 + k2) + 2 * w2)
    d = 8 * n_ph ** 3 * d2 ** 3
    f = 8 * k ** 3 * d2 * (k2 + d2) * (d2 + k2 + 5 * w2)
    g = 16 * n_ph * k2 * d2 * d2 * (d2 + k2 + w2)
    return math.sqrt((a + b * s + c * s ** 2 + d * s ** 3) / (f + g * s) / 2.0)


def optimal_detuning_and_max_en(kappa_over_omega_m: float) -> tuple[float, float]:
    """Detuning that minimizes eta_minus at threshold, and the peak E_N.

    Noise-free closed forms; the peak log-negativity approaches ln(5/3)
    deep in the resolved-sideband limit.
    """
    k = kappa_over_omega_m
    delta = 0.25 * math.sqrt(1.0 + math.sqrt((4.0 * k) ** 2 + 81.0))
    e_n = -math.log(math.sqrt(9.0 + 128.0 * k ** 2 / (8.0 * k ** 2 + 45.0)) / 5.0)
    return delta, e_n


def approx_n_eff(params: SystemParams, ss: SteadyState) -> float:
    """Weak-coupling occupancy including the frequency-noise heating term.

    n_eff = [n*gamma_m + A_plus + |alpha|^2 * delta * Gamma_op *
    S(omega_eff) / (2*kappa*omega_m)] / (gamma_m + Gamma_op).
    Warns outside the weak-coupling regime it is calibrated for.
    """
    n = params.thermal_phonons()
    gm, wm, k = params.gamma_m, params.omega_m, params.kappa
    if ss.g_eff > 0.5 * k or gm > 0.1 * k:
        warnings.warn("occupancy formula assumes kappa >> gamma_m, G", stacklevel=2)
    if n * gm > 0.1 * wm or ss.g_eff > 0.5 * wm:
        warnings.warn("occupancy formula assumes omega_m >> n*gamma_m, G",
                      stacklevel=2)
    rates = scattering_rates(params, ss)
    omega_eff = effective_response(params, ss).omega_eff
    s_peak = float(phase_noise_spectrum(params.phase_noise, omega_eff))
    heating = (ss.photon_number * ss.delta_eff * rates.gamma_op * s_peak
               / (2.0 * k * wm))
    return (n * gm + rates.a_plus + heating) / (gm + rates.gamma_op)


def _quad_checked(func, a, b, what: str, **kwargs) -> float:
    out = scipy.integrate.quad(func, a, b, full_output=1, **kwargs)
    value, abserr = out[0], out[1]
    if len(out) > 3:  # warning message appended on trouble
        raise QuadratureNotConverged(f"{what}: {out[3].splitlines()[0]}",
                                     achieved_error=float(abserr))
    return value


def laser_correlation(spec: NoiseSpec, tau: float) -> float:
    """Field autocorrelation C(tau) = <exp(i[phi(t+tau) - phi(t)])>.

    For stationary Gaussian frequency noise the double time integral
    collapses to exp(-(1/pi) * int_0^inf S(w) (1 - cos(w tau))/w^2 dw);
    flat noise of strength gamma_l gives exp(-gamma_l |tau|).
    """
    if spec.kind == "none" or spec.gamma_l == 0.0 or tau == 0.0:
        return 1.0
    t = abs(tau)

    def smooth_part(w):
        # 2 sin^2 form avoids cancellation in (1 - cos) at small w*t
        return float(phase_noise_spectrum(spec, w)) * 2.0 * math.sin(0.5 * w * t) ** 2 / w ** 2

    if spec.kind == "white":
        w0 = 0.5 * math.pi / t
        head = _quad_checked(smooth_part, 0.0, w0, "laser correlation head",
                             epsabs=1e-12, epsrel=1e-12)
        s_flat = 2.0 * spec.gamma_l
        flat = _quad_checked(lambda w: s_flat / w ** 2, w0, np.inf,
                             "laser correlation flat tail",
                             epsabs=1e-12, epsrel=1e-12)
        osc = _quad_checked(lambda w: s_flat / w ** 2, w0, np.inf,
                            "laser correlation oscillatory tail",
                            weight="cos", wvar=t, epsabs=1e-12, limit=400)
        exponent = (head + flat - osc) / math.pi
        return math.exp(-exponent)

    # bandpass: the spectrum decays like w^-4, so a finite window suffices
    band, width = spec.omega_band, max(spec.gamma_tilde, 1e-3 * spec.omega_band)
    w0 = min(0.5 * math.pi / t, 0.25 * band)
    w_max = 30.0 * max(band, width)
    head = _quad_checked(smooth_part, 0.0, w0, "laser correlation head",
                         epsabs=1e-12, epsrel=1e-12)
    edges = sorted({w0, max(band - 4 * width, w0), band, band + 4 * width, w_max})
    edges = [e for e in edges if w0 <= e <= w_max]
    flat = osc = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        flat += _quad_checked(lambda w: float(phase_noise_spectrum(spec, w)) / w ** 2,
                              a, b, "laser correlation band", epsabs=1e-13,
                              epsrel=1e-12, limit=400)
        osc += _quad_checked(lambda w: float(phase_noise_spectrum(spec, w)) / w ** 2,
                             a, b, "laser correlation band (cos)",
                             weight="cos", wvar=t, epsabs=1e-13, limit=400)
    return math.exp(-(head + flat - osc) / math.pi)
