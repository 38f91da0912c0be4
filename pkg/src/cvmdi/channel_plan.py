"""DWDM channel allocations and four-wave-mixing triple search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .units import dbm_to_watt, frequency_to_wavelength, wavelength_to_frequency

GRID_ANCHOR_HZ = 193.1e12
GRID_SPACING_HZ = 100e9
C_BAND_NM = (1530.0, 1565.0)
O_BAND_NM = (1260.0, 1360.0)
DEFAULT_MATCH_TOLERANCE_HZ = 1e9

# two frequencies closer than this are the same channel
_COINCIDENCE_HZ = 1e6

# (classical channel count, quantum wavelength in nm)
TABLE_CONFIGURATIONS = {
    1: (10, 1536.61),
    2: (10, 1310.0),
    3: (40, 1537.40),
    4: (40, 1310.0),
}


@dataclass(frozen=True)
class ChannelPlan:
    """Quantum channel plus the classical channels sharing the fiber.

    Attributes:
        quantum_wavelength: Quantum channel wavelength in nm.
        classical_frequencies: Classical channel frequencies in Hz, ascending.
        per_channel_output_power: Output power of each classical channel, dBm.
    """

    quantum_wavelength: float
    classical_frequencies: tuple[float, ...]
    per_channel_output_power: float

    def __post_init__(self):
        freqs = tuple(float(f) for f in self.classical_frequencies)
        object.__setattr__(self, "classical_frequencies", freqs)
        if not self.quantum_wavelength > 0:
            raise ValueError("quantum wavelength must be positive")
        if not np.isfinite(self.per_channel_output_power):
            raise ValueError("per-channel output power must be finite")
        arr = np.asarray(freqs)
        if np.any(~(arr > 0)):
            raise ValueError("classical frequencies must be positive")
        if len(np.unique(arr)) != len(arr):
            raise ValueError("classical frequencies must be distinct")
        fq = self.quantum_frequency
        if np.any(np.abs(arr - fq) < _COINCIDENCE_HZ):
            raise ValueError(
                f"quantum channel at {fq / 1e12:.4f} THz coincides with a classical channel"
            )

    @property
    def channel_count(self) -> int:
        return len(self.classical_frequencies)

    @property
    def quantum_frequency(self) -> float:
        return wavelength_to_frequency(self.quantum_wavelength)

    @property
    def classical_wavelengths(self) -> np.ndarray:
        """Classical channel wavelengths in nm."""
        return np.array([frequency_to_wavelength(f) for f in self.classical_frequencies])

    @property
    def channel_powers_w(self) -> np.ndarray:
        return np.full(self.channel_count, dbm_to_watt(self.per_channel_output_power))

    def with_power(self, output_power_dbm: float) -> "ChannelPlan":
        return ChannelPlan(self.quantum_wavelength, self.classical_frequencies, output_power_dbm)


@dataclass(frozen=True)
class FwmTriple:
    """Pump indices (i, j, k) whose product f_i + f_j - f_k hits the quantum channel."""

    i: int
    j: int
    k: int
    degeneracy: int


def _in_band(freq_hz: float, band_nm: tuple[float, float]) -> bool:
    lam = frequency_to_wavelength(freq_hz)
    return band_nm[0] <= lam <= band_nm[1]


def grid_plan(channel_count: int, quantum_wavelength: float,
              output_power_dbm: float) -> ChannelPlan:
    """Place ``channel_count`` classical channels on the 100 GHz C-band grid.

    Slots are taken in order of distance from 193.1 THz (lower frequency first
    on ties), restricted to 1530-1565 nm, skipping the slot that holds the
    quantum channel.
    """
    if channel_count < 1:
        raise ValueError("channel_count must be positive")
    lo = wavelength_to_frequency(C_BAND_NM[1])
    hi = wavelength_to_frequency(C_BAND_NM[0])
    n_lo = int(np.ceil((lo - GRID_ANCHOR_HZ) / GRID_SPACING_HZ))
    n_hi = int(np.floor((hi - GRID_ANCHOR_HZ) / GRID_SPACING_HZ))
    fq = wavelength_to_frequency(quantum_wavelength)
    slots = [
        n for n in range(n_lo, n_hi + 1)
        if abs(GRID_ANCHOR_HZ + n * GRID_SPACING_HZ - fq) > GRID_SPACING_HZ / 2
    ]
    if channel_count > len(slots):
        raise ValueError(
            f"only {len(slots)} free C-band grid slots, {channel_count} channels requested"
        )
    chosen = sorted(sorted(slots, key=lambda n: (abs(n), n))[:channel_count])
    # n * spacing rounds to whole Hz for integer n, keeping the grid exact
    freqs = tuple(GRID_ANCHOR_HZ + n * GRID_SPACING_HZ for n in chosen)
    return ChannelPlan(quantum_wavelength, freqs, output_power_dbm)


def build_configuration(config_id: int, output_power_dbm: float = -24.0) -> ChannelPlan:
    """One of the four reference allocations (10/40 channels, C- or O-band quantum)."""
    if config_id not in TABLE_CONFIGURATIONS:
        raise ValueError(
            f"unknown configuration {config_id!r}; expected one of {sorted(TABLE_CONFIGURATIONS)}"
        )
    count, lam_q = TABLE_CONFIGURATIONS[config_id]
    return grid_plan(count, lam_q, output_power_dbm)


def enumerate_fwm_triples(plan: ChannelPlan,
                          tolerance: float = DEFAULT_MATCH_TOLERANCE_HZ) -> list[FwmTriple]:
    """All canonical triples (i <= j, any k) whose FWM product lands on the quantum channel.

    A triple matches when ``|f_i + f_j - f_k - f_q| <= tolerance``. Output is
    sorted lexicographically by ``(i, j, k)``.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    return list(_triples_cached(plan.classical_frequencies, plan.quantum_frequency,
                                float(tolerance)))


@lru_cache(maxsize=64)
def _triples_cached(freqs: tuple[float, ...], fq: float,
                    tolerance: float) -> tuple[FwmTriple, ...]:
    f = np.asarray(freqs)
    n = len(f)
    if n == 0:
        return ()
    product = f[:, None, None] + f[None, :, None] - f[None, None, :]
    upper = np.triu(np.ones((n, n), dtype=bool))[:, :, None]
    hit = (np.abs(product - fq) <= tolerance) & upper
    ii, jj, kk = np.nonzero(hit)
    return tuple(
        FwmTriple(int(i), int(j), int(k), 3 if i == j else 6)
        for i, j, k in zip(ii, jj, kk)
    )
