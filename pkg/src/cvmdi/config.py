"""Run configuration: reference parameters, user overrides, scenario assembly."""

from __future__ import annotations

import copy
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel_plan import TABLE_CONFIGURATIONS, ChannelPlan, build_configuration
from .noise import DetectionParams, DwdmParams, FiberSpec, FwmParams, output_power_dbm
from .raman import RamanTable, default_table
from .scenario import LinkScenario
from .security import ProtocolParams


class ConfigError(ValueError):
    """Configuration file or override could not be parsed or validated."""


def reference_config() -> dict:
    text = (resources.files("cvmdi") / "data" / "reference.toml").read_text()
    return tomllib.loads(text)


def _merge(base: dict, override: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        path = f"{where}{key}"
        if key == "plan" and not where:
            out[key] = copy.deepcopy(value)
            continue
        if key not in base:
            raise ConfigError(f"unknown configuration key {path!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{path!r} must be a table")
            out[key] = _merge(base[key], value, f"{path}.")
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config_file(path) -> dict:
    """Read a TOML config, or the ``config`` entry of a JSON run manifest."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        if path.suffix == ".json":
            data = json.loads(text)
            if "config" not in data:
                raise ConfigError(f"{path}: manifest has no 'config' entry")
            return data["config"]
        return tomllib.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _number(section: dict, key: str, where: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _pair(section: dict, key: str, kind, where: str) -> tuple:
    value = section[key]
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(v, kind) for v in value)):
        raise ConfigError(f"{where}.{key} must be a two-element list [alice, bob]")
    return tuple(value)


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully merged parameters for one run.

    ``raw`` is the merged dictionary (reference values plus overrides); it is
    what the run manifest records.
    """

    raw: dict
    configurations: tuple
    ratios: tuple[float, ...]
    max_km: float
    step_km: float
    resolution_km: float

    @classmethod
    def from_dict(cls, override: dict | None = None) -> "RunConfig":
        raw = _merge(reference_config(), override or {})
        try:
            return cls._validate(raw)
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from None

    @classmethod
    def _validate(cls, raw: dict) -> "RunConfig":
        if "plan" in raw:
            plan = raw["plan"]
            for key in plan:
                if key not in ("quantum_wavelength_nm", "classical_frequencies_thz", "output_power_dbm"):
                    raise ConfigError(f"unknown configuration key 'plan.{key}'")
            configurations = ("custom",)
        else:
            ids = raw["configurations"]
            if not isinstance(ids, list) or not ids:
                raise ConfigError("configurations must be a non-empty list")
            for cid in ids:
                if isinstance(cid, bool) or cid not in TABLE_CONFIGURATIONS:
                    raise ConfigError(
                        f"unknown configuration id {cid!r}; expected one of {sorted(TABLE_CONFIGURATIONS)}"
                    )
            configurations = tuple(int(c) for c in ids)
        ratios = raw["ratios"]
        if not isinstance(ratios, list) or not ratios:
            raise ConfigError("ratios must be a non-empty list")
        for r in ratios:
            if isinstance(r, bool) or not isinstance(r, (int, float)) or not r > 0:
                raise ConfigError(f"asymmetry ratios must be positive numbers, got {r!r}")
        sweep = raw["sweep"]
        max_km = _number(sweep, "max_km", "sweep")
        step_km = _number(sweep, "step_km", "sweep")
        resolution = _number(sweep, "resolution_km", "sweep")
        if not (max_km > 0 and step_km > 0 and resolution > 0):
            raise ConfigError("sweep.max_km, step_km and resolution_km must be positive")
        cfg = cls(raw, configurations, tuple(float(r) for r in ratios), max_km, step_km, resolution)
        # build every parameter object once so bad values fail at parse time
        try:
            cfg.parameter_objects()
            for cid in configurations:
                cfg.plan(cid)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    def with_overrides(self, **changes) -> "RunConfig":
        raw = copy.deepcopy(self.raw)
        for dotted, value in changes.items():
            if value is None:
                continue
            *parents, leaf = dotted.split(".")
            node = raw
            for p in parents:
                node = node[p]
            node[leaf] = value
        return RunConfig.from_dict(raw)

    def grid(self):
        """Total-length sweep grid 0, step, 2 step, ... up to ``max_km``."""
        n = int(self.max_km / self.step_km + 1e-9)
        return [round(k * self.step_km, 12) for k in range(n + 1)]

    def parameter_objects(self) -> dict:
        r = self.raw
        where = "protocol"
        protocol = ProtocolParams(
            variance_alice=_number(r[where], "variance_alice", where),
            variance_bob=_number(r[where], "variance_bob", where),
            reconciliation_efficiency=_number(r[where], "reconciliation_efficiency", where),
        )
        fiber = FiberSpec({
            "C": _number(r["fiber"], "attenuation_c_db_per_km", "fiber"),
            "O": _number(r["fiber"], "attenuation_o_db_per_km", "fiber"),
        })
        d = r["dwdm"]
        dwdm = DwdmParams(
            receiver_sensitivity=_number(d, "receiver_sensitivity_dbm", "dwdm"),
            insertion_loss_system=_number(d, "insertion_loss_db", "dwdm"),
            isolation=_number(d, "isolation_db", "dwdm"),
            filter_bandwidth=_number(d, "filter_bandwidth_ghz", "dwdm") * 1e9,
        )
        t = r["detection"]
        detection = DetectionParams(
            detection_window=_number(t, "window_ns", "detection") * 1e-9,
            detector_efficiency=_number(t, "detector_efficiency", "detection"),
            insertion_loss_detection=_number(t, "insertion_loss_db", "detection"),
        )
        f = r["fwm"]
        fwm = FwmParams(
            nonlinear_coefficient=_number(f, "nonlinear_coefficient_per_w_km", "fwm"),
            dispersion=_number(f, "dispersion_ps_nm_km", "fwm"),
            dispersion_slope=_number(f, "dispersion_slope_ps_nm2_km", "fwm"),
            polarization_factor=_number(f, "polarization_factor", "fwm"),
        )
        p = r["paths"]
        directions = _pair(p, "raman_direction", str, "paths")
        baseline = _number(r["protocol"], "baseline_excess_noise_snu", "protocol")
        if baseline < 0:
            raise ConfigError("protocol.baseline_excess_noise_snu must be non-negative")
        return {
            "protocol": protocol,
            "fiber": fiber,
            "dwdm": dwdm,
            "detection": detection,
            "fwm_params": fwm,
            "baseline_excess_noise": baseline,
            "raman_paths": _pair(p, "raman", bool, "paths"),
            "fwm_paths": _pair(p, "fwm", bool, "paths"),
            "lcxt_paths": _pair(p, "lcxt", bool, "paths"),
            "raman_direction_alice": directions[0],
            "raman_direction_bob": directions[1],
            "fwm_tolerance": _number(f, "match_tolerance_ghz", "fwm") * 1e9,
        }

    def output_power_dbm(self) -> float:
        return output_power_dbm(self.parameter_objects()["dwdm"])

    def plan(self, configuration) -> ChannelPlan:
        if configuration == "custom":
            spec = self.raw["plan"]
            try:
                freqs = tuple(float(f) * 1e12 for f in spec["classical_frequencies_thz"])
                lam_q = float(spec["quantum_wavelength_nm"])
            except KeyError as exc:
                raise ConfigError(f"plan override is missing {exc.args[0]!r}") from None
            power = float(spec.get("output_power_dbm", self.output_power_dbm()))
            return ChannelPlan(lam_q, tuple(sorted(freqs)), power)
        return build_configuration(configuration, self.output_power_dbm())

    def raman_table_path(self) -> str:
        return str(self.raw["data"]["raman_table"])

    def load_raman_table(self) -> RamanTable:
        path = self.raman_table_path()
        return RamanTable.load(path) if path else default_table()

    def scenario(self, configuration, ratio: float, table: RamanTable | None = None) -> LinkScenario:
        """Zero-length scenario template for one configuration and asymmetry ratio."""
        table = table if table is not None else self.load_raman_table()
        return LinkScenario(
            plan=self.plan(configuration),
            raman_table=table,
            asymmetry_ratio=float(ratio),
            **self.parameter_objects(),
        )


def default_scenario(configuration: int, ratio: float = 1.0) -> LinkScenario:
    """Scenario built from the committed reference parameters."""
    return RunConfig.from_dict().scenario(configuration, ratio)
