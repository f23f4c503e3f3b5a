import math

import pytest

from optomech import NoiseSpec, SystemParams

OMEGA_M = 2.0 * math.pi * 1e7


def make_params(**overrides) -> SystemParams:
    """Baseline working point used throughout the suite."""
    values = dict(
        omega_m=OMEGA_M,
        quality_factor=2e6,
        kappa=0.5 * OMEGA_M,
        detuning=OMEGA_M,
        g0=1e3,
        laser_power=20e-3,
        laser_wavelength=810e-9,
        bath_temperature=0.4,
        phase_noise=NoiseSpec.none(),
        detuning_mode="effective",
    )
    values.update(overrides)
    return SystemParams(**values)


def bandpass_100hz(omega_band=2.0 * math.pi * 5e4) -> NoiseSpec:
    """The reference noise setting: 0.1 kHz linewidth, band width = center/2."""
    return NoiseSpec.bandpass(2.0 * math.pi * 100.0, omega_band, omega_band / 2.0)


@pytest.fixture
def paper_point() -> SystemParams:
    return make_params(phase_noise=bandpass_100hz())
