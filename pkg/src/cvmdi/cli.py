"""Command-line driver: sweeps and max-distance searches written to CSV.

Exit codes: 0 success, 2 configuration error, 3 data-file error,
4 numerical error.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config_file
from .raman import RamanTableError
from .scenario import max_distance, sweep
from .security import NumericalDomainError, UnphysicalStateError

log = logging.getLogger("cvmdi")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

SWEEP_COLUMNS = (
    "total_length_km", "length_alice_km", "length_bob_km", "xi_a_snu", "xi_b_snu",
    "xi_prime_snu", "mutual_information_bits", "holevo_bits", "key_fraction_bits",
)
SUMMARY_COLUMNS = ("configuration", "ratio", "max_distance_km")


def fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def sweep_filename(configuration, ratio: float) -> str:
    return f"sweep_config{configuration}_ratio{ratio:g}.csv"


def sweep_csv(result) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in result.rows:
        values = (r.total_length, r.length_alice, r.length_bob, r.xi_a, r.xi_b, r.xi_prime,
                  r.mutual_information, r.holevo, r.key_fraction)
        lines.append(",".join(fmt(v) for v in values))
    return "\n".join(lines) + "\n"


def _run_one(cfg: RunConfig, configuration, ratio: float, table):
    template = cfg.scenario(configuration, ratio, table)
    result = sweep(template, cfg.grid(), resolution=cfg.resolution_km)
    reach = max_distance(template, cfg.max_km, cfg.resolution_km)
    return sweep_csv(result), reach


PLOT_SCRIPT = '''"""Key rate versus total fiber length, one panel per configuration.

Generated by cvmdi; reads the sweep CSVs next to this file.
"""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).parent
CONFIGURATIONS = {configurations!r}
RATIOS = {ratios!r}

fig, axes = plt.subplots(1, len(CONFIGURATIONS), figsize=(4 * len(CONFIGURATIONS), 3.5),
                         sharey=True, squeeze=False)
for ax, cfg in zip(axes[0], CONFIGURATIONS):
    for ratio in RATIOS:
        with open(HERE / f"sweep_config{{cfg}}_ratio{{ratio:g}}.csv") as fh:
            rows = [r for r in csv.DictReader(fh)]
        x = [float(r["total_length_km"]) for r in rows]
        y = [float(r["key_fraction_bits"]) for r in rows]
        ax.plot(x, y, label=f"L_a/L_b = {{ratio:g}}")
    ax.set_title(f"configuration {{cfg}}")
    ax.set_xlabel("total fiber length, km")
    ax.set_yscale("log")
axes[0][0].set_ylabel("secure key fraction, bits/use")
axes[0][0].legend()
fig.tight_layout()
fig.savefig(HERE / "rate_vs_length.png", dpi=150)
'''


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def run(cfg: RunConfig, out_dir, emit_plot_script: bool = False, workers: int = 1) -> dict:
    """Execute every (configuration x ratio) scenario and write the outputs.

    Returns the manifest dictionary. On any failure the files written so far
    are removed before the exception propagates.
    """
    out_dir = Path(out_dir)
    table = cfg.load_raman_table()
    jobs = [(c, r) for c in cfg.configurations for r in cfg.ratios]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, cfg, c, r, table) for c, r in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(cfg, c, r, table) for c, r in jobs]

    created_dir = not out_dir.exists()
    written: list[Path] = []
    outputs = {}

    def write(name: str, text: str) -> None:
        path = out_dir / name
        path.write_text(text)
        written.append(path)
        outputs[name] = _sha256(text.encode())

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        summary = [",".join(SUMMARY_COLUMNS)]
        for (c, r), (csv_text, reach) in zip(jobs, results):
            write(sweep_filename(c, r), csv_text)
            summary.append(f"{c},{r:g},{fmt(reach)}")
        write("summary.csv", "\n".join(summary) + "\n")
        if emit_plot_script:
            write("plot_rate_vs_length.py", PLOT_SCRIPT.format(
                configurations=list(cfg.configurations), ratios=list(cfg.ratios)))
        manifest = {
            "generator": f"cvmdi {__version__}",
            "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config": copy.deepcopy(cfg.raw),
            "data_files": {"raman_table": {"source": table.source, "sha256": table.sha256}},
            "outputs": outputs,
        }
        write("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        if created_dir and out_dir.exists() and not any(out_dir.iterdir()):
            out_dir.rmdir()
        raise
    return manifest


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cvmdi-run", description=__doc__.splitlines()[0])
    p.add_argument("--config", type=Path, help="TOML config, or a manifest.json from an earlier run")
    p.add_argument("--configuration", type=_int_list, help="configuration ids, e.g. 1,3")
    p.add_argument("--ratios", type=_float_list, help="asymmetry ratios L_alice/L_bob, e.g. 1,1.5,2")
    p.add_argument("--max-km", type=float, help="sweep end and max-distance search bound (km)")
    p.add_argument("--step-km", type=float, help="sweep grid step (km)")
    p.add_argument("--raman-table", type=Path, help="Raman cross-section CSV")
    p.add_argument("--out", type=Path, default=Path("cvmdi-out"), help="output directory")
    p.add_argument("--emit-plot-script", action="store_true", help="also write a matplotlib script")
    p.add_argument("--workers", type=int, default=1, help="parallel scenario processes")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    override = load_config_file(args.config) if args.config else {}
    cfg = RunConfig.from_dict(override)
    raw = copy.deepcopy(cfg.raw)
    if args.configuration is not None:
        raw.pop("plan", None)
        raw["configurations"] = args.configuration
    if args.ratios is not None:
        raw["ratios"] = args.ratios
    if args.max_km is not None:
        raw["sweep"]["max_km"] = args.max_km
    if args.step_km is not None:
        raw["sweep"]["step_km"] = args.step_km
    if args.raman_table is not None:
        raw["data"]["raman_table"] = str(args.raman_table)
    return RunConfig.from_dict(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        manifest = run(cfg, args.out, args.emit_plot_script, args.workers)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (RamanTableError, OSError) as exc:
        log.error("data error: %s", exc)
        return EXIT_DATA
    except (NumericalDomainError, UnphysicalStateError, ArithmeticError) as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERIC
    log.info("wrote %d files to %s", len(manifest["outputs"]) + 1, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
