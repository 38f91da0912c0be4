"""Unit conversions shared across the package.

Power arithmetic is done in watts; dB and dBm only show up at the edges.
"""

from __future__ import annotations

import math

PLANCK_CONSTANT = 6.62607015e-34  # J s
LIGHT_SPEED = 2.99792458e8  # m/s


def _check_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def db_to_linear(x: float) -> float:
    return 10.0 ** (_check_finite(x, "decibel value") / 10.0)


def linear_to_db(ratio: float) -> float:
    if ratio <= 0:
        raise ValueError(f"ratio must be positive, got {ratio!r}")
    return 10.0 * math.log10(ratio)


def dbm_to_watt(p: float) -> float:
    return 1e-3 * 10.0 ** (_check_finite(p, "dBm value") / 10.0)


def watt_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError(f"power must be positive, got {watts!r}")
    return 10.0 * math.log10(watts / 1e-3)


def wavelength_to_frequency(wavelength_nm: float) -> float:
    """Optical frequency in Hz of a vacuum wavelength given in nm."""
    if not wavelength_nm > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength_nm!r}")
    return LIGHT_SPEED / (wavelength_nm * 1e-9)


def frequency_to_wavelength(frequency_hz: float) -> float:
    """Vacuum wavelength in nm of an optical frequency given in Hz."""
    if not frequency_hz > 0:
        raise ValueError(f"frequency must be positive, got {frequency_hz!r}")
    return LIGHT_SPEED / frequency_hz * 1e9


def photon_energy(wavelength_nm: float) -> float:
    """h c / lambda in joules."""
    return PLANCK_CONSTANT * wavelength_to_frequency(wavelength_nm)


def db_per_km_to_neper(alpha_db_per_km: float) -> float:
    """Natural-log loss coefficient (1/km) for an attenuation in dB/km.

    ``exp(-xi * L)`` with the returned ``xi`` equals ``10**(-alpha * L / 10)``.
    """
    return alpha_db_per_km * math.log(10.0) / 10.0


def transmittance(alpha_db_per_km: float, length_km: float) -> float:
    if alpha_db_per_km < 0:
        raise ValueError(f"attenuation must be non-negative, got {alpha_db_per_km!r}")
    if length_km < 0:
        raise ValueError(f"length must be non-negative, got {length_km!r}")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def bandwidth_hz_to_nm(bandwidth_hz: float, wavelength_nm: float) -> float:
    """Width in nm of a frequency band centred on ``wavelength_nm``.

    First-order relation d(lambda) = lambda^2 / c * d(f).
    """
    lam = wavelength_nm * 1e-9
    return lam * lam / LIGHT_SPEED * bandwidth_hz * 1e9
