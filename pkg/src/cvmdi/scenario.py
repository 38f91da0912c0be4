"""Link topology, rate-versus-distance sweeps and maximal-distance search.

Alice and Bob each feed a fiber segment ending at the relay (Charlie). The
classical DWDM traffic runs from Alice to Bob through both segments, so it
co-propagates with Alice's quantum signal (forward Raman) and
counter-propagates with Bob's (backward Raman).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import noise
from .channel_plan import DEFAULT_MATCH_TOLERANCE_HZ, ChannelPlan
from .noise import DetectionParams, DwdmParams, FiberSpec, FwmParams, NoiseBudget
from .raman import RamanTable
from .security import EquivalentChannel, ProtocolParams, RateBreakdown, key_fraction
from .units import dbm_to_watt, transmittance

PATHS = ("alice", "bob")
DIRECTIONS = ("forward", "backward")
DEFAULT_RESOLUTION_KM = 0.01
DEFAULT_COARSE_STEP_KM = 0.25


def split_lengths(total: float, ratio: float) -> tuple[float, float]:
    """Split ``total`` km so that L_alice / L_bob = ``ratio``."""
    if not ratio > 0:
        raise ValueError(f"asymmetry ratio must be positive, got {ratio!r}")
    if total < 0:
        raise ValueError(f"total length must be non-negative, got {total!r}")
    return total * ratio / (1.0 + ratio), total / (1.0 + ratio)


@dataclass(frozen=True)
class LinkScenario:
    """Everything needed to evaluate the key rate of one link geometry.

    Per-path toggles are ``(alice, bob)`` pairs. ``baseline_excess_noise`` is
    device excess noise (SNU) added on each side before channel noise.
    """

    plan: ChannelPlan
    raman_table: RamanTable
    fiber: FiberSpec
    dwdm: DwdmParams
    detection: DetectionParams
    fwm_params: FwmParams
    protocol: ProtocolParams = field(default_factory=ProtocolParams)
    baseline_excess_noise: float = 0.0
    length_alice: float = 0.0
    length_bob: float = 0.0
    asymmetry_ratio: float = 1.0
    raman_direction_alice: str = "forward"
    raman_direction_bob: str = "backward"
    raman_paths: tuple[bool, bool] = (True, True)
    lcxt_paths: tuple[bool, bool] = (True, True)
    fwm_paths: tuple[bool, bool] = (True, False)
    fwm_tolerance: float = DEFAULT_MATCH_TOLERANCE_HZ

    def __post_init__(self):
        if self.length_alice < 0 or self.length_bob < 0:
            raise ValueError("segment lengths must be non-negative")
        if not self.asymmetry_ratio > 0:
            raise ValueError("asymmetry ratio must be positive")
        if self.baseline_excess_noise < 0:
            raise ValueError("baseline excess noise must be non-negative")
        for d in (self.raman_direction_alice, self.raman_direction_bob):
            if d not in DIRECTIONS:
                raise ValueError(f"Raman direction must be one of {DIRECTIONS}, got {d!r}")

    @property
    def total_length(self) -> float:
        return self.length_alice + self.length_bob

    def at_total(self, total: float) -> "LinkScenario":
        """Copy with ``total`` km split according to ``asymmetry_ratio``."""
        la, lb = split_lengths(total, self.asymmetry_ratio)
        return replace(self, length_alice=la, length_bob=lb)

    def attenuation(self) -> float:
        return self.fiber.attenuation(self.plan.quantum_wavelength)


def _path_index(path: str) -> int:
    try:
        return PATHS.index(path)
    except ValueError:
        raise ValueError(f"path must be one of {PATHS}, got {path!r}") from None


def path_noise(scenario: LinkScenario, path: str) -> NoiseBudget:
    """Noise budget at the relay for the quantum signal arriving from ``path``."""
    idx = _path_index(path)
    length = (scenario.length_alice, scenario.length_bob)[idx]
    direction = (scenario.raman_direction_alice, scenario.raman_direction_bob)[idx]
    plan = scenario.plan
    lam_q = plan.quantum_wavelength
    p_out_dbm = plan.per_channel_output_power
    p_out = dbm_to_watt(p_out_dbm)
    bw_nm = noise.filter_bandwidth_nm(scenario.dwdm, lam_q)
    xi_km = scenario.fiber.loss_coefficient(lam_q)

    p_raman = 0.0
    if scenario.raman_paths[idx] and length > 0:
        if direction == "forward":
            p_raman = noise.raman_forward(p_out, length, plan, scenario.raman_table, bw_nm)
        else:
            p_raman = noise.raman_backward(p_out, length, xi_km, plan, scenario.raman_table, bw_nm)
    p_fwm = 0.0
    if scenario.fwm_paths[idx]:
        p_fwm = noise.fwm_total_power(plan, scenario.fiber, scenario.fwm_params, length,
                                      scenario.fwm_tolerance)
    p_lcxt = 0.0
    if scenario.lcxt_paths[idx]:
        p_lcxt = noise.lcxt_power(p_out_dbm, scenario.dwdm.isolation)

    det = scenario.detection
    return NoiseBudget(
        p_raman_w=p_raman,
        p_fwm_w=p_fwm,
        p_lcxt_w=p_lcxt,
        prob_raman=noise.photon_probability(p_raman, lam_q, det),
        prob_fwm=noise.photon_probability(p_fwm, lam_q, det),
        prob_lcxt=noise.photon_probability(p_lcxt, lam_q, det),
        baseline_snu=scenario.baseline_excess_noise,
    )


def equivalent_channel(scenario: LinkScenario) -> EquivalentChannel:
    alpha = scenario.attenuation()
    eta_a = transmittance(alpha, scenario.length_alice)
    eta_b = transmittance(alpha, scenario.length_bob)
    xi_a = path_noise(scenario, "alice").excess_noise_snu
    xi_b = path_noise(scenario, "bob").excess_noise_snu
    return EquivalentChannel.from_links(eta_a, eta_b, xi_a, xi_b, scenario.protocol.variance_bob)


def rate_at(scenario: LinkScenario) -> RateBreakdown:
    return key_fraction(scenario.protocol, equivalent_channel(scenario))


@dataclass(frozen=True)
class SweepRow:
    total_length: float
    length_alice: float
    length_bob: float
    xi_a: float
    xi_b: float
    xi_prime: float
    mutual_information: float
    holevo: float
    key_fraction: float
    raw_rate: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    max_distance: float | None

    @property
    def total_lengths(self) -> np.ndarray:
        return np.array([r.total_length for r in self.rows])

    @property
    def key_fractions(self) -> np.ndarray:
        return np.array([r.key_fraction for r in self.rows])


def evaluate_row(template: LinkScenario, total: float) -> SweepRow:
    sc = template.at_total(total)
    channel = equivalent_channel(sc)
    rate = key_fraction(sc.protocol, channel)
    return SweepRow(
        total_length=float(total),
        length_alice=sc.length_alice,
        length_bob=sc.length_bob,
        xi_a=channel.xi_a,
        xi_b=channel.xi_b,
        xi_prime=channel.xi_prime,
        mutual_information=rate.mutual_information,
        holevo=rate.holevo_bound,
        key_fraction=rate.key_fraction,
        raw_rate=rate.raw_rate,
    )


def _raw_rate(template: LinkScenario, total: float) -> float:
    return rate_at(template.at_total(total)).raw_rate


def _bisect(template: LinkScenario, lo: float, hi: float, resolution: float) -> float:
    # invariant: raw rate > 0 at lo, <= 0 at hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if _raw_rate(template, mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


def sweep(template: LinkScenario, total_lengths, executor=None,
          resolution: float = DEFAULT_RESOLUTION_KM) -> SweepResult:
    """Rate at each total length of a strictly increasing grid.

    ``executor`` is any ``concurrent.futures.Executor``; rows come back in
    grid order either way. When the rate changes sign inside the grid, the
    last crossing is refined by bisection into ``max_distance``.
    """
    grid = [float(x) for x in np.atleast_1d(np.asarray(total_lengths, dtype=float))]
    if any(x < 0 for x in grid):
        raise ValueError("grid lengths must be non-negative")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if executor is None:
        rows = tuple(evaluate_row(template, x) for x in grid)
    else:
        rows = tuple(executor.map(evaluate_row, [template] * len(grid), grid))

    max_dist = None
    positive = [r.raw_rate > 0 for r in rows]
    if positive and positive[0] and not positive[-1]:
        i = max(k for k in range(len(rows) - 1) if positive[k] and not positive[k + 1])
        max_dist = _bisect(template, grid[i], grid[i + 1], resolution)
    return SweepResult(rows, max_dist)


def max_distance(template: LinkScenario, upper_bound: float,
                 resolution: float = DEFAULT_RESOLUTION_KM,
                 coarse_step: float = DEFAULT_COARSE_STEP_KM) -> float | None:
    """Largest total length (km) with a positive key rate, or None.

    A coarse scan over [0, upper_bound] finds the last positive grid point
    followed by a non-positive one; bisection on the raw rate then narrows the
    crossing to ``resolution``. Returns ``upper_bound`` when the rate is still
    positive there.
    """
    if not upper_bound > 0:
        raise ValueError("upper_bound must be positive")
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    n = max(1, math.ceil(upper_bound / coarse_step))
    grid = np.linspace(0.0, upper_bound, n + 1)
    raw = [_raw_rate(template, float(x)) for x in grid]
    if raw[0] <= 0:
        return None
    if raw[-1] > 0:
        return float(upper_bound)
    i = max(k for k in range(n) if raw[k] > 0 and raw[k + 1] <= 0)
    return _bisect(template, float(grid[i]), float(grid[i + 1]), resolution)
