"""Coexistence noise at the quantum receiver: Raman, four-wave mixing, crosstalk.

Powers are in watts, lengths in km unless a function says otherwise. Noise
powers become detection probabilities per measurement window, then excess
noise in shot-noise units (SNU).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel_plan import DEFAULT_MATCH_TOLERANCE_HZ, ChannelPlan, FwmTriple, enumerate_fwm_triples
from .raman import RamanTable
from .units import (
    LIGHT_SPEED,
    bandwidth_hz_to_nm,
    db_per_km_to_neper,
    dbm_to_watt,
    photon_energy,
)

# ITU-T band edges in nm
BANDS_NM = {
    "O": (1260.0, 1360.0),
    "E": (1360.0, 1460.0),
    "S": (1460.0, 1530.0),
    "C": (1530.0, 1565.0),
    "L": (1565.0, 1625.0),
}

# 1 ps/(nm km) in s/m^2 and 1 ps/(nm^2 km) in s/m^3
_PS_NM_KM = 1e-12 / (1e-9 * 1e3)
_PS_NM2_KM = 1e-12 / (1e-18 * 1e3)


def band_of(wavelength_nm: float) -> str:
    for name, (lo, hi) in BANDS_NM.items():
        if lo <= wavelength_nm <= hi:
            return name
    raise ValueError(f"{wavelength_nm} nm is outside the O-L telecom bands")


@dataclass(frozen=True)
class FiberSpec:
    """Attenuation (dB/km) per telecom band, e.g. ``{"C": 0.18, "O": 0.34}``."""

    attenuation_db_per_km: dict

    def __post_init__(self):
        for band, alpha in self.attenuation_db_per_km.items():
            if band not in BANDS_NM:
                raise ValueError(f"unknown band {band!r}")
            if alpha < 0:
                raise ValueError(f"attenuation for band {band} must be non-negative")

    def attenuation(self, wavelength_nm: float) -> float:
        band = band_of(wavelength_nm)
        try:
            return float(self.attenuation_db_per_km[band])
        except KeyError:
            raise ValueError(f"no attenuation configured for {band}-band ({wavelength_nm} nm)") from None

    def loss_coefficient(self, wavelength_nm: float) -> float:
        """Natural-log loss coefficient in 1/km."""
        return db_per_km_to_neper(self.attenuation(wavelength_nm))


@dataclass(frozen=True)
class DwdmParams:
    receiver_sensitivity: float  # dBm
    insertion_loss_system: float  # dB
    isolation: float  # dB
    filter_bandwidth: float  # Hz

    def __post_init__(self):
        if not self.isolation > 0:
            raise ValueError("isolation must be positive")
        if not self.filter_bandwidth > 0:
            raise ValueError("filter bandwidth must be positive")


@dataclass(frozen=True)
class DetectionParams:
    detection_window: float  # s
    detector_efficiency: float
    insertion_loss_detection: float  # dB

    def __post_init__(self):
        if not self.detection_window > 0:
            raise ValueError("detection window must be positive")
        if not 0 < self.detector_efficiency <= 1:
            raise ValueError("detector efficiency must lie in (0, 1]")
        if self.insertion_loss_detection < 0:
            raise ValueError("detection insertion loss must be non-negative")

    @property
    def path_transmission(self) -> float:
        return 10.0 ** (-0.1 * self.insertion_loss_detection)


@dataclass(frozen=True)
class FwmParams:
    """Fiber nonlinearity and dispersion entering the FWM product power.

    Attributes:
        nonlinear_coefficient: gamma in 1/(W km).
        dispersion: D_c in ps/(nm km).
        dispersion_slope: dD_c/dlambda in ps/(nm^2 km).
        polarization_factor: extra multiplicative factor p (enters squared).
    """

    nonlinear_coefficient: float
    dispersion: float
    dispersion_slope: float
    polarization_factor: float = 1.0

    def __post_init__(self):
        if self.nonlinear_coefficient < 0:
            raise ValueError("nonlinear coefficient must be non-negative")


@dataclass(frozen=True)
class NoiseBudget:
    p_raman_w: float
    p_fwm_w: float
    p_lcxt_w: float
    prob_raman: float
    prob_fwm: float
    prob_lcxt: float
    baseline_snu: float = 0.0
    excess_noise_snu: float = field(init=False)

    def __post_init__(self):
        total = self.prob_raman + self.prob_fwm + self.prob_lcxt
        object.__setattr__(self, "excess_noise_snu", self.baseline_snu + excess_noise_snu(total))


def output_power_dbm(params: DwdmParams) -> float:
    return params.receiver_sensitivity + params.insertion_loss_system


def filter_bandwidth_nm(params: DwdmParams, quantum_wavelength_nm: float) -> float:
    return bandwidth_hz_to_nm(params.filter_bandwidth, quantum_wavelength_nm)


def _check_length(length: float) -> None:
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length!r}")


def raman_forward(p_out: float, length: float, plan: ChannelPlan, table: RamanTable,
                  filter_bandwidth_nm: float) -> float:
    """Co-propagating SpRS power reaching the quantum receiver."""
    _check_length(length)
    rho = table.rho_sum(plan.classical_wavelengths, plan.quantum_wavelength)
    return p_out * length * rho * filter_bandwidth_nm


def raman_backward(p_out: float, length: float, loss_coefficient: float, plan: ChannelPlan,
                   table: RamanTable, filter_bandwidth_nm: float) -> float:
    """Counter-propagating SpRS power; ``loss_coefficient`` is the natural-log loss in 1/km."""
    _check_length(length)
    if not loss_coefficient > 0:
        raise ValueError("loss coefficient must be positive")
    rho = table.rho_sum(plan.classical_wavelengths, plan.quantum_wavelength)
    return p_out * math.sinh(loss_coefficient * length) / loss_coefficient * rho * filter_bandwidth_nm


def fwm_phase_mismatch(f_i, f_j, f_k, wavelength: float, fwm: FwmParams):
    """Phase mismatch (1/m) of the product f_i + f_j - f_k at ``wavelength`` (m)."""
    d_ik = np.abs(np.asarray(f_i, dtype=float) - f_k)
    d_jk = np.abs(np.asarray(f_j, dtype=float) - f_k)
    lam2_c = wavelength * wavelength / LIGHT_SPEED
    disp = fwm.dispersion * _PS_NM_KM
    slope = fwm.dispersion_slope * _PS_NM2_KM
    out = 2.0 * math.pi * lam2_c * d_ik * d_jk * (disp + slope * lam2_c * (d_ik + d_jk))
    return out if np.ndim(out) else float(out)


def fwm_efficiency(delta_beta, loss_coefficient: float, length: float):
    """Phase-matching efficiency; SI units (1/m, 1/m, m).

    At zero length the bracket is 0/0 and its limit makes the efficiency 1.
    """
    if not loss_coefficient > 0:
        raise ValueError("loss coefficient must be positive")
    _check_length(length)
    db = np.asarray(delta_beta, dtype=float)
    xi = loss_coefficient
    prefactor = xi * xi / (xi * xi + db * db)
    if length == 0:
        out = np.ones_like(db)
    else:
        decay = math.exp(-xi * length)
        denom = math.expm1(-xi * length) ** 2
        out = prefactor * (1.0 + 4.0 * decay * np.sin(db * length / 2.0) ** 2 / denom)
    return out if np.ndim(out) else float(out)


def _fwm_scale(fwm: FwmParams, xi_km: float, length_km: float) -> float:
    # gamma^2 p^2 e^{-xi L} (1 - e^{-xi L})^2 / (9 xi^2), per unit D^2 and P^3
    return (fwm.nonlinear_coefficient ** 2 * fwm.polarization_factor ** 2
            * math.exp(-xi_km * length_km) * math.expm1(-xi_km * length_km) ** 2
            / (9.0 * xi_km * xi_km))


def fwm_product_power(triple: FwmTriple, plan: ChannelPlan, fiber: FiberSpec,
                      fwm: FwmParams, length: float) -> float:
    """Peak power of one FWM product at the end of ``length`` km."""
    _check_length(length)
    xi_km = fiber.loss_coefficient(plan.quantum_wavelength)
    f = plan.classical_frequencies
    p = plan.channel_powers_w
    dbeta = fwm_phase_mismatch(f[triple.i], f[triple.j], f[triple.k],
                               plan.quantum_wavelength * 1e-9, fwm)
    eta = fwm_efficiency(dbeta, xi_km / 1e3, length * 1e3)
    return (eta * triple.degeneracy ** 2 * _fwm_scale(fwm, xi_km, length)
            * p[triple.i] * p[triple.j] * p[triple.k])


def fwm_total_power(plan: ChannelPlan, fiber: FiberSpec, fwm: FwmParams, length: float,
                    tolerance: float = DEFAULT_MATCH_TOLERANCE_HZ) -> float:
    """Sum of FWM product powers over every triple landing on the quantum channel."""
    _check_length(length)
    triples = enumerate_fwm_triples(plan, tolerance)
    if not triples:
        return 0.0
    idx = np.array([(t.i, t.j, t.k, t.degeneracy) for t in triples])
    f = np.asarray(plan.classical_frequencies)
    p = plan.channel_powers_w
    xi_km = fiber.loss_coefficient(plan.quantum_wavelength)
    dbeta = fwm_phase_mismatch(f[idx[:, 0]], f[idx[:, 1]], f[idx[:, 2]],
                               plan.quantum_wavelength * 1e-9, fwm)
    eta = fwm_efficiency(dbeta, xi_km / 1e3, length * 1e3)
    powers = eta * idx[:, 3] ** 2 * p[idx[:, 0]] * p[idx[:, 1]] * p[idx[:, 2]]
    return float(np.sum(powers) * _fwm_scale(fwm, xi_km, length))


def lcxt_power(p_out_dbm: float, isolation: float) -> float:
    """Classical power leaking through a demultiplexer with ``isolation`` dB."""
    if isolation < 0:
        raise ValueError("isolation must be non-negative")
    return dbm_to_watt(p_out_dbm - isolation)


def photon_probability(power: float, quantum_wavelength: float, det: DetectionParams) -> float:
    """Mean noise photons detected per window for ``power`` watts at ``quantum_wavelength`` nm."""
    if power < 0:
        raise ValueError("power must be non-negative")
    return (power / photon_energy(quantum_wavelength) * det.detection_window
            * det.detector_efficiency * det.path_transmission)


def excess_noise_snu(prob_total: float) -> float:
    """Excess variance of a thermal field with mean photon number ``prob_total``.

    Variance 2n + 1 against the vacuum's 1 leaves 2n SNU.
    """
    if prob_total < 0:
        raise ValueError("probability must be non-negative")
    return 2.0 * prob_total
