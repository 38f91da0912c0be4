"""Gaussian security analysis of MDI CV-QKD reduced to a one-way channel.

The two Alice/Bob-to-relay links collapse into one equivalent channel with
transmittance T and excess noise xi'. The two-mode covariance matrix of that
channel gives the mutual information and the Holevo bound (reverse
reconciliation, heterodyne-equivalent measurement on Bob's side), and the
Devetak-Winter rate follows as beta * I - chi.

All variances are in shot-noise units (vacuum = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PHYSICALITY_TOL = 1e-9


class NumericalDomainError(ArithmeticError):
    """A quantity left its mathematical domain beyond rounding tolerance."""


class UnphysicalStateError(ValueError):
    """Covariance matrix violates the uncertainty principle."""


@dataclass(frozen=True)
class ProtocolParams:
    variance_alice: float = 40.0
    variance_bob: float = 40.0
    reconciliation_efficiency: float = 1.0

    def __post_init__(self):
        if self.variance_alice < 1 or self.variance_bob < 1:
            raise ValueError("modulation variances must be >= 1 SNU")
        if not 0 <= self.reconciliation_efficiency <= 1:
            raise ValueError("reconciliation efficiency must lie in [0, 1]")


def _check_transmittance(eta: float, name: str) -> None:
    if not 0 < eta <= 1:
        raise ValueError(f"{name} must lie in (0, 1], got {eta!r}")


def optimal_gain(eta_b: float, v_b: float) -> float:
    """Bob's displacement gain that minimizes the equivalent excess noise."""
    _check_transmittance(eta_b, "eta_b")
    if v_b < 1:
        raise ValueError("v_b must be >= 1")
    return math.sqrt(2.0 / eta_b) * math.sqrt((v_b - 1.0) / (v_b + 1.0))


def equivalent_excess_noise(eta_a: float, eta_b: float, xi_a: float, xi_b: float) -> float:
    """Equivalent-channel excess noise at the optimal gain."""
    if eta_a == 0:
        raise ZeroDivisionError("eta_a must be non-zero")
    _check_transmittance(eta_a, "eta_a")
    _check_transmittance(eta_b, "eta_b")
    return xi_a + (eta_b * (xi_b - 2.0) + 2.0) / eta_a


def general_excess_noise(eta_a: float, eta_b: float, xi_a: float, xi_b: float, g: float,
                         v_b: float = 40.0) -> float:
    """Equivalent-channel excess noise for an arbitrary gain ``g``.

    Reduces to :func:`equivalent_excess_noise` when ``g`` is the optimal gain,
    where the squared mismatch term vanishes.
    """
    if g == 0:
        raise ZeroDivisionError("gain must be non-zero")
    if g < 0:
        raise ValueError("gain must be positive")
    _check_transmittance(eta_a, "eta_a")
    _check_transmittance(eta_b, "eta_b")
    big_xi_a = (1.0 - eta_a) / eta_a + xi_a
    big_xi_b = (1.0 - eta_b) / eta_b + xi_b
    mismatch = math.sqrt(2.0) / g * math.sqrt(v_b - 1.0) - math.sqrt(eta_b) * math.sqrt(v_b + 1.0)
    return (1.0 + (eta_b * (big_xi_b - 1.0) + eta_a * big_xi_a) / eta_a
            + mismatch * mismatch / eta_a)


@dataclass(frozen=True)
class EquivalentChannel:
    eta_a: float
    eta_b: float
    xi_a: float
    xi_b: float
    gain_g: float
    t_equiv: float
    xi_prime: float

    @classmethod
    def from_links(cls, eta_a: float, eta_b: float, xi_a: float, xi_b: float,
                   variance_bob: float = 40.0, gain: float | None = None) -> "EquivalentChannel":
        if xi_a < 0 or xi_b < 0:
            raise ValueError("excess noise must be non-negative")
        if gain is None:
            gain = optimal_gain(eta_b, variance_bob)
            xi_prime = equivalent_excess_noise(eta_a, eta_b, xi_a, xi_b)
        else:
            xi_prime = general_excess_noise(eta_a, eta_b, xi_a, xi_b, gain, variance_bob)
        return cls(eta_a, eta_b, xi_a, xi_b, gain, eta_a * gain * gain / 2.0, xi_prime)


@dataclass(frozen=True)
class CovarianceState:
    """Two-mode matrix [[a I, c Z], [c Z, b I]] with Z the Pauli z matrix.

    ``c_squared`` is stored rather than ``c``: every entropic quantity depends
    on c only through c^2, and near-pure states lose their purity to rounding
    when c is stored and squared again.
    """

    a: float
    b: float
    c_squared: float

    def __post_init__(self):
        if self.a < 1 - PHYSICALITY_TOL or self.b < 1 - PHYSICALITY_TOL:
            raise UnphysicalStateError(f"diagonal entries must be >= 1 (a={self.a}, b={self.b})")
        if self.c_squared < 0:
            raise ValueError("c_squared must be non-negative")

    @classmethod
    def from_entries(cls, a: float, b: float, c: float) -> "CovarianceState":
        return cls(a, b, c * c)

    @classmethod
    def two_mode_squeezed(cls, v: float) -> "CovarianceState":
        """Pure state a = b = V, c = sqrt(V^2 - 1)."""
        return cls(v, v, v * v - 1.0)

    @property
    def c(self) -> float:
        return math.sqrt(self.c_squared)

    def matrix(self) -> np.ndarray:
        """Dense 4x4 matrix in (x_A, p_A, x_B, p_B) ordering."""
        a, b, c = self.a, self.b, self.c
        return np.array([
            [a, 0, c, 0],
            [0, a, 0, -c],
            [c, 0, b, 0],
            [0, -c, 0, b],
        ], dtype=float)


def build_covariance(params: ProtocolParams, channel: EquivalentChannel) -> CovarianceState:
    v = params.variance_alice
    t = channel.t_equiv
    state = CovarianceState(
        a=v,
        b=t * (v - 1.0) + 1.0 + t * channel.xi_prime,
        c_squared=t * (v * v - 1.0),
    )
    nu2 = symplectic_eigenvalues(state)[1]
    if nu2 < 1 - PHYSICALITY_TOL:
        raise UnphysicalStateError(
            f"smallest symplectic eigenvalue {nu2:.12g} < 1 for T={t:.6g}, xi'={channel.xi_prime:.6g}"
        )
    return state


def symplectic_eigenvalues(state: CovarianceState) -> tuple[float, float]:
    """(nu_1, nu_2) with nu_1 >= nu_2.

    Uses Delta^2 - 4 det = (a - b)^2 ((a + b)^2 - 4 c^2), which avoids the
    cancellation of the textbook discriminant near degenerate spectra.
    """
    a, b, c2 = state.a, state.b, state.c_squared
    z2 = (a + b) ** 2 - 4.0 * c2
    if z2 < 0:
        if z2 < -1e-12 * (a + b) ** 2:
            raise NumericalDomainError(f"negative symplectic discriminant {z2:.3e}")
        z2 = 0.0
    z = math.sqrt(z2)
    nu1 = (z + abs(b - a)) / 2.0
    det_sqrt = a * b - c2
    # nu1 * nu2 = ab - c^2; dividing is exact-er than subtracting when nu2 is small
    nu2 = det_sqrt / nu1 if nu1 > 0 else 0.0
    return nu1, nu2


def conditional_eigenvalue(state: CovarianceState) -> float:
    """Symplectic eigenvalue of mode A after heterodyne detection of mode B."""
    a, b, c2 = state.a, state.b, state.c_squared
    return (a * b + a - c2) / (b + 1.0)


def g_function(x: float) -> float:
    """Von Neumann entropy (bits) of a thermal state with mean photon number x."""
    if x < 0:
        if x < -1e-12:
            raise NumericalDomainError(f"g_function argument {x!r} is negative")
        return 0.0
    if x == 0:
        return 0.0
    return ((x + 1.0) * math.log1p(x) - x * math.log(x)) / math.log(2.0)


def mutual_information(state: CovarianceState) -> float:
    """Alice-Bob mutual information (bits per use), both quadratures."""
    s = (state.a + 1.0) * (state.b + 1.0)
    return math.log2(s / (s - state.c_squared))


def holevo_bound(state: CovarianceState) -> float:
    nu1, nu2 = symplectic_eigenvalues(state)
    nu3 = conditional_eigenvalue(state)
    return (g_function((nu1 - 1.0) / 2.0) + g_function((nu2 - 1.0) / 2.0)
            - g_function((nu3 - 1.0) / 2.0))


@dataclass(frozen=True)
class RateBreakdown:
    mutual_information: float
    holevo_bound: float
    raw_rate: float
    key_fraction: float
    symplectic_eigenvalues: tuple[float, float, float]

    def bits_per_second(self, symbol_rate: float) -> float:
        return self.key_fraction * symbol_rate


def key_fraction(params: ProtocolParams, channel: EquivalentChannel) -> RateBreakdown:
    """Devetak-Winter secure key fraction with the raw (unclamped) value kept."""
    state = build_covariance(params, channel)
    info = mutual_information(state)
    chi = holevo_bound(state)
    raw = params.reconciliation_efficiency * info - chi
    nu1, nu2 = symplectic_eigenvalues(state)
    return RateBreakdown(info, chi, raw, max(0.0, raw), (nu1, nu2, conditional_eigenvalue(state)))


def rate_for_links(eta_a: float, eta_b: float, xi_a: float, xi_b: float,
                   params: ProtocolParams | None = None) -> RateBreakdown:
    params = params or ProtocolParams()
    channel = EquivalentChannel.from_links(eta_a, eta_b, xi_a, xi_b, params.variance_bob)
    return key_fraction(params, channel)
