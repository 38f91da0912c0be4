import csv
import json

import pytest

from cvmdi import cli
from cvmdi.config import ConfigError, RunConfig, load_config_file
from cvmdi.scenario import max_distance


def read_summary(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def run_cli(tmp_path, *extra, name="out"):
    out = tmp_path / name
    try:
        code = cli.main(["--out", str(out), *extra])
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    return code, out


def test_reference_config():
    cfg = RunConfig.from_dict()
    assert cfg.configurations == (1, 2, 3, 4)
    assert cfg.ratios == (1.0, 1.5, 2.0)
    assert cfg.grid()[:3] == [0.0, 0.1, 0.2] and cfg.grid()[-1] == 10.0
    assert cfg.output_power_dbm() == -24.0


@pytest.mark.parametrize("override", [
    {"configurations": [5]},
    {"configurations": []},
    {"ratios": [0]},
    {"ratios": ["a"]},
    {"sweep": {"step_km": -1}},
    {"dwdm": {"isolation_db": "x"}},
    {"bogus": 1},
    {"fiber": {"bogus": 1}},
    {"paths": {"fwm": [True]}},
    {"plan": {"quantum_wavelength_nm": 1550.0}},
])
def test_invalid_overrides(override):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(override)


def test_plan_override():
    cfg = RunConfig.from_dict({"plan": {"quantum_wavelength_nm": 1310.0,
                                        "classical_frequencies_thz": [193.0, 193.1]}})
    assert cfg.configurations == ("custom",)
    plan = cfg.plan("custom")
    assert plan.channel_count == 2 and plan.per_channel_output_power == -24.0


def test_load_config_file(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("ratios = [1.0]\n[sweep]\nmax_km = 3.0\n")
    assert load_config_file(p) == {"ratios": [1.0], "sweep": {"max_km": 3.0}}
    bad = tmp_path / "bad.toml"
    bad.write_text("ratios = [")
    with pytest.raises(ConfigError):
        load_config_file(bad)
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "missing.toml")


@pytest.mark.parametrize("args", [["--configuration", "5"], ["--ratios", "x"],
                                  ["--ratios", "-1"], ["--step-km", "0"]])
def test_config_errors_exit_2_without_files(tmp_path, args):
    code, out = run_cli(tmp_path, *args)
    assert code == 2
    assert not out.exists()


def test_bad_raman_table_exit_3(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("not,a,table\n1,2,3\n")
    code, out = run_cli(tmp_path, "--raman-table", str(table), "--configuration", "1")
    assert code == 3
    assert not out.exists()
    code, out = run_cli(tmp_path, "--raman-table", str(tmp_path / "nope.csv"))
    assert code == 3


def test_run_outputs_and_reproducibility(tmp_path):
    args = ("--configuration", "1,2", "--ratios", "1,2", "--max-km", "6", "--step-km", "0.5",
            "--emit-plot-script")
    code, a = run_cli(tmp_path, *args, name="a")
    assert code == 0
    code, b = run_cli(tmp_path, *args, name="b")
    assert code == 0
    names = sorted(p.name for p in a.iterdir())
    assert "summary.csv" in names and "manifest.json" in names
    assert "sweep_config1_ratio1.csv" in names and "sweep_config2_ratio2.csv" in names
    for name in names:
        if name != "manifest.json":
            assert (a / name).read_bytes() == (b / name).read_bytes()
    compile((a / "plot_rate_vs_length.py").read_text(), "plot", "exec")

    header = (a / "sweep_config1_ratio1.csv").read_text().splitlines()[0]
    assert header.split(",") == list(cli.SWEEP_COLUMNS)

    manifest = json.loads((a / "manifest.json").read_text())
    assert set(manifest["outputs"]) == set(names) - {"manifest.json"}
    code, c = run_cli(tmp_path, "--config", str(a / "manifest.json"), name="c")
    assert code == 0
    for name in names:
        if name.endswith(".csv"):
            assert (a / name).read_bytes() == (c / name).read_bytes()

    cfg = RunConfig.from_dict(manifest["config"])
    for row in read_summary(a / "summary.csv"):
        reach = max_distance(cfg.scenario(int(row["configuration"]), float(row["ratio"])),
                             cfg.max_km, cfg.resolution_km)
        assert float(row["max_distance_km"]) == pytest.approx(reach, rel=1e-11)


def test_parallel_workers_match_serial(tmp_path):
    args = ("--configuration", "1", "--ratios", "1,1.5", "--max-km", "6", "--step-km", "1")
    assert run_cli(tmp_path, *args, name="s")[0] == 0
    assert run_cli(tmp_path, *args, "--workers", "2", name="p")[0] == 0
    for f in (tmp_path / "s").iterdir():
        if f.name != "manifest.json":
            assert f.read_bytes() == (tmp_path / "p" / f.name).read_bytes()
