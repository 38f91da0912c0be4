"""Spontaneous Raman cross-section tables.

A table maps (classical wavelength, quantum wavelength) to the normalized
scattering cross-section rho in 1/(nm km). Lookups interpolate linearly in
classical wavelength along the rows of one tabulated quantum wavelength and
never extrapolate.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .units import LIGHT_SPEED, PLANCK_CONSTANT, frequency_to_wavelength, wavelength_to_frequency

COLUMNS = ("classical_wavelength_nm", "quantum_wavelength_nm", "rho_per_nm_per_km")

# quantum wavelengths closer than this address the same table block
QUANTUM_MATCH_NM = 0.01


class RamanTableError(ValueError):
    """Malformed table file or a lookup outside the tabulated range."""


@dataclass(frozen=True)
class RamanTable:
    """Read-only cross-section table, one sorted block per quantum wavelength."""

    blocks: dict[float, tuple[np.ndarray, np.ndarray]]
    source: str = "<memory>"
    sha256: str = field(default="", compare=False)

    @classmethod
    def from_rows(cls, rows, source: str = "<memory>", sha256: str = "") -> "RamanTable":
        grouped: dict[float, list[tuple[float, float]]] = {}
        for lam_c, lam_q, rho in rows:
            lam_c, lam_q, rho = float(lam_c), float(lam_q), float(rho)
            if not (math.isfinite(rho) and rho >= 0):
                raise RamanTableError(f"rho must be finite and >= 0, got {rho} at ({lam_c}, {lam_q})")
            if not (lam_c > 0 and lam_q > 0):
                raise RamanTableError(f"wavelengths must be positive, got ({lam_c}, {lam_q})")
            grouped.setdefault(lam_q, []).append((lam_c, rho))
        blocks = {}
        for lam_q, pts in grouped.items():
            pts.sort()
            xs = np.array([p[0] for p in pts])
            if np.any(np.diff(xs) <= 0):
                raise RamanTableError(f"duplicate classical wavelength in block {lam_q} nm")
            blocks[lam_q] = (xs, np.array([p[1] for p in pts]))
        if not blocks:
            raise RamanTableError(f"{source}: table has no rows")
        return cls(blocks, source, sha256)

    @classmethod
    def from_text(cls, text: str, source: str = "<memory>") -> "RamanTable":
        digest = hashlib.sha256(text.encode()).hexdigest()
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        reader = csv.reader(io.StringIO("\n".join(lines)))
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise RamanTableError(f"{source}: empty table") from None
        if tuple(header) != COLUMNS:
            raise RamanTableError(f"{source}: expected header {','.join(COLUMNS)}, got {','.join(header)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise RamanTableError(f"{source}: data row {lineno} has {len(row)} fields")
            try:
                rows.append(tuple(float(v) for v in row))
            except ValueError as exc:
                raise RamanTableError(f"{source}: data row {lineno}: {exc}") from None
        return cls.from_rows(rows, source, digest)

    @classmethod
    def load(cls, path) -> "RamanTable":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise RamanTableError(f"cannot read Raman table {path}: {exc}") from None
        return cls.from_text(text, str(path))

    @property
    def quantum_wavelengths(self) -> list[float]:
        return sorted(self.blocks)

    def _block(self, lam_q: float):
        best = min(self.blocks, key=lambda q: abs(q - lam_q))
        if abs(best - lam_q) > QUANTUM_MATCH_NM:
            raise RamanTableError(
                f"Raman table {self.source} has no block for quantum wavelength {lam_q} nm"
            )
        return self.blocks[best]

    def rho(self, classical_nm, quantum_nm: float) -> np.ndarray:
        """Cross-section for one or more classical wavelengths at ``quantum_nm``."""
        xs, ys = self._block(quantum_nm)
        lam_c = np.atleast_1d(np.asarray(classical_nm, dtype=float))
        outside = (lam_c < xs[0]) | (lam_c > xs[-1])
        if np.any(outside):
            bad = lam_c[outside][0]
            raise RamanTableError(
                f"Raman table {self.source} does not cover classical {bad:.3f} nm "
                f"with quantum {quantum_nm} nm (covered {xs[0]}-{xs[-1]} nm)"
            )
        return np.interp(lam_c, xs, ys)

    def rho_sum(self, classical_nm, quantum_nm: float) -> float:
        return float(np.sum(self.rho(classical_nm, quantum_nm)))


def flat_table(rho: float, quantum_nm, classical_range_nm=(1500.0, 1600.0)) -> RamanTable:
    """Constant-rho table; handy for tests and ablations."""
    rows = []
    for lam_q in np.atleast_1d(quantum_nm):
        rows += [(classical_range_nm[0], lam_q, rho), (classical_range_nm[1], lam_q, rho)]
    return RamanTable.from_rows(rows, source=f"<flat rho={rho:g}>")


def default_table() -> RamanTable:
    ref = resources.files("cvmdi") / "data" / "raman_cross_section.csv"
    return RamanTable.from_text(ref.read_text(), source=f"cvmdi:data/{ref.name}")


# --- silica model used to generate the bundled table -----------------------

# Normalized fused-silica Raman gain vs frequency shift (THz): coarse
# piecewise-linear trace of the standard single-mode-fiber spectrum.
_GAIN_SHAPE_THZ = np.array([0.0, 2.0, 5.0, 8.0, 11.0, 13.2, 14.5, 15.5, 16.5, 18.0,
                            20.0, 22.0, 24.0, 26.0, 28.0, 30.0, 32.0, 34.0, 36.0,
                            38.0, 40.0, 45.0])
_GAIN_SHAPE = np.array([0.0, 0.15, 0.38, 0.60, 0.84, 1.00, 0.90, 0.55, 0.40, 0.33,
                        0.30, 0.33, 0.35, 0.25, 0.12, 0.08, 0.07, 0.05, 0.04,
                        0.02, 0.01, 0.0])
# peak Stokes cross-section at 1550 nm; g_R/A_eff ~ 0.75 /(W km) times hv dv/dlambda, halved for one polarization
MODEL_PEAK_RHO = 6.0e-9
MODEL_TEMPERATURE_K = 300.0
_BOLTZMANN = 1.380649e-23


def silica_cross_section(classical_nm, quantum_nm: float,
                         temperature_k: float = MODEL_TEMPERATURE_K) -> np.ndarray:
    """Model rho(lambda_c, lambda_q) in 1/(nm km) from the silica gain shape.

    Stokes light (quantum below the pump frequency) carries the thermal factor
    n + 1, anti-Stokes light carries n, with n the Bose occupation at the
    shift. The result is scaled by (1550 / lambda_q)^2 for the nm-to-Hz
    Jacobian around the quantum wavelength.
    """
    nu_c = LIGHT_SPEED / (np.asarray(classical_nm, dtype=float) * 1e-9)
    nu_q = wavelength_to_frequency(quantum_nm)
    shift = nu_c - nu_q
    # clip at 1 GHz: gain * occupation tends to a finite limit at zero shift
    mag = np.maximum(np.abs(shift), 1e9)
    gain = np.interp(mag / 1e12, _GAIN_SHAPE_THZ, _GAIN_SHAPE, right=0.0)
    with np.errstate(divide="ignore", over="ignore"):
        occupation = 1.0 / np.expm1(PLANCK_CONSTANT * mag / (_BOLTZMANN * temperature_k))
    thermal = np.where(shift > 0, occupation + 1.0, occupation)
    value = gain * thermal
    # normalize so the Stokes peak at 13.2 THz equals MODEL_PEAK_RHO
    peak_occ = 1.0 / math.expm1(PLANCK_CONSTANT * 13.2e12 / (_BOLTZMANN * temperature_k))
    return MODEL_PEAK_RHO * value / (peak_occ + 1.0) * (1550.0 / quantum_nm) ** 2


def model_table_rows(quantum_nm, classical_range_nm=(1525.0, 1570.0), step_nm=0.1):
    lam_c = np.round(np.arange(classical_range_nm[0], classical_range_nm[1] + step_nm / 2, step_nm), 4)
    rows = []
    for lam_q in quantum_nm:
        for c, r in zip(lam_c, silica_cross_section(lam_c, lam_q)):
            rows.append((float(c), float(lam_q), float(r)))
    return rows


def default_model_quantum_wavelengths() -> list[float]:
    """1310 nm plus every 100 GHz grid wavelength in 1530-1565 nm, to 0.01 nm."""
    out = [1310.0]
    n = -20
    while True:
        f = 193.1e12 + n * 100e9
        lam = frequency_to_wavelength(f)
        n += 1
        if lam > 1565.0:
            continue
        if lam < 1530.0:
            break
        out.append(round(lam, 2))
    return sorted(set(out))


def write_model_table(path, quantum_nm=None) -> None:
    quantum_nm = default_model_quantum_wavelengths() if quantum_nm is None else quantum_nm
    header = [
        "# Spontaneous Raman cross-section rho(lambda_c, lambda_q) for standard single-mode fiber.",
        "# Provenance: generated by cvmdi.raman.write_model_table from a piecewise-linear",
        "# approximation of the normalized fused-silica Raman gain spectrum with Bose-Einstein",
        f"# thermal factors at {MODEL_TEMPERATURE_K:g} K, scaled to a Stokes peak of {MODEL_PEAK_RHO:g} /(nm km).",
        "# This is a model-derived table, not a measurement; replace it with measured",
        "# cross-sections for quantitative work (same columns, --raman-table).",
        ",".join(COLUMNS),
    ]
    body = [f"{c:.4f},{q:.2f},{r:.6e}" for c, q, r in model_table_rows(quantum_nm)]
    Path(path).write_text("\n".join(header + body) + "\n")
