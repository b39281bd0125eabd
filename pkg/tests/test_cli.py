import numpy as np
import pytest

from qpgsim import __version__, cli, export
from qpgsim.errors import ConfigError

FAST_REPORT = ["--set", "trials=100000", "--set", "pdc_grid_num=120"]


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def test_help_lists_every_key(capsys):
    with pytest.raises(SystemExit):
        cli.main(["report", "--help"])
    text = capsys.readouterr().out
    for p in cli.SCHEMAS["report"]:
        assert p.name in text


def test_config_file_and_overrides(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[operating-points]\ntemperatures = 190, 250\ntargets = 550\n")
    cfg = cli.load_config("operating-points", ini, ["targets=551"])
    assert cfg["temperatures"] == (190.0, 250.0)
    assert cfg["targets"] == (551.0,)


@pytest.mark.parametrize(
    "args, key",
    [
        (["operating-points", "--set", "material=unobtainium"], "operating-points.material"),
        (["operating-points", "--set", "polarization_in=x"], "operating-points.polarization_in"),
        (["phasematching", "--set", "length=-1"], "phasematching.length"),
        (["phasematching", "--set", "lambda_in_start=200"], "phasematching.lambda_in_start"),
        (["report", "--set", "klyshko_open=2"], "report.klyshko_open"),
        (["jsa", "--set", "grid_num=abc"], "jsa.grid_num"),
        (["gvm-map", "--set", "nonsense=1"], "gvm-map.nonsense"),
        (["operating-points", "--set", "process=opo"], "operating-points.process"),
    ],
)
def test_config_errors_exit_2_and_name_key(tmp_path, capsys, args, key):
    assert run(tmp_path, *args) == 2
    assert key in capsys.readouterr().err
    assert not any(tmp_path.iterdir())


def test_computational_error_exits_1_and_cleans_up(tmp_path, capsys, monkeypatch):
    def boom(cfg):
        raise cli.QPGError("synthetic failure")

    monkeypatch.setattr(cli, "run_report", boom)
    assert run(tmp_path, "report") == 1
    assert "synthetic failure" in capsys.readouterr().err
    assert not (tmp_path / "summary.txt").exists()


def test_partial_outputs_removed(tmp_path, monkeypatch):
    calls = []
    real = export.write_marginal

    def fail_second(*a, **k):
        calls.append(1)
        if len(calls) == 2:
            raise OSError("disk full")
        return real(*a, **k)

    monkeypatch.setattr(export, "write_marginal", fail_second)
    code = run(tmp_path, "jsa", "--set", "grid_num=40", "--set", "pump_fwhm=1.3e12")
    assert code == 1
    assert list(tmp_path.iterdir()) == []


def test_gvm_map_outputs(tmp_path):
    assert run(tmp_path, "gvm-map", "--set", "lambda_in_num=21", "--set", "lambda_pump_num=31", "--gnuplot") == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "gvm_T190.dat" in names and "gvm_zero_T300.dat" in names and "gvm_T190.gp" in names
    data = np.loadtxt(tmp_path / "gvm_T190.dat")
    assert data.shape == (21 * 31, 3)
    zero = np.loadtxt(tmp_path / "gvm_zero_T190.dat")
    # the zero contour passes the 190 C operating point
    lp = np.interp(1545.0, zero[:, 0], zero[:, 1])
    assert lp == pytest.approx(854.0, abs=15.0)


def test_gvm_map_single_pixel(tmp_path):
    args = ["gvm-map", "--set", "temperatures=190", "--set", "targets=550"]
    args += ["--set", "lambda_in_num=1", "--set", "lambda_pump_num=1"]
    assert run(tmp_path, *args) == 0
    assert np.loadtxt(tmp_path / "gvm_T190.dat").shape == (3,)


def test_phasematching_map_round_trip(tmp_path):
    assert run(tmp_path, "phasematching", "--set", "lambda_in_num=16", "--set", "lambda_pump_num=12") == 0
    a, b, vals = export.read_map(tmp_path / "phasematching.dat")
    assert vals.shape == (16, 12)
    assert np.all(np.abs(vals) <= 1 + 1e-9)
    s = export.read_summary(tmp_path / "phasematching_summary.txt")
    assert s["lambda_out_nm"] == pytest.approx(550.0, abs=0.1)


def test_jsa_outputs(tmp_path):
    assert run(tmp_path, "jsa", "--set", "grid_num=60", "--set", "schmidt_modes=5") == 0
    rows = np.loadtxt(tmp_path / "schmidt.dat")
    assert rows.shape == (5, 2)
    assert np.all(np.diff(rows[:, 1]) <= 0)
    s = export.read_summary(tmp_path / "jsa_summary.txt")
    assert s["schmidt_number"] < 1.3


def test_operating_points_file(tmp_path):
    assert run(tmp_path, "operating-points", "--set", "targets=550", "--set", "temperatures=190") == 0
    text = (tmp_path / "operating_points.dat").read_text()
    assert "# trend" in text
    row = np.loadtxt(tmp_path / "operating_points.dat", ndmin=2)[0]
    assert row[1] == pytest.approx(1545.0, abs=15) and row[2] == pytest.approx(854.0, abs=15)


def test_report_headers_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["report", *FAST_REPORT, "--out", str(a)]) == 0
    assert cli.main(["report", *FAST_REPORT, "--set", "workers=3", "--out", str(b)]) == 0
    head = (a / "summary.txt").read_text().splitlines()[:3]
    assert head[0] == f"# qpgsim {__version__}"
    assert head[1].startswith("# config_sha256 ") and head[2] == "# seed 0"
    assert (b / "summary.txt").read_bytes() == (a / "summary.txt").read_bytes()
    assert cli.main(["report", *FAST_REPORT, "--set", "seed=1", "--out", str(b)]) == 0
    assert (b / "summary.txt").read_bytes() != (a / "summary.txt").read_bytes()
    s = export.read_summary(a / "summary.txt")
    assert s["compression_factor_measured"] == pytest.approx(7.47, abs=0.01)
    assert s["filter_baseline"] == pytest.approx(0.1340, abs=5e-4)


def test_config_hash_stable():
    assert export.config_hash({"a": 1, "b": 2}) == export.config_hash({"b": 2, "a": 1})
    assert export.config_hash({"a": 1}) != export.config_hash({"a": 2})


def test_bad_override_syntax():
    with pytest.raises(ConfigError):
        cli.load_config("report", None, ["trials"])
