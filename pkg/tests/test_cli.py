import json

import pytest

from randsinglet import ensemble as ens
from randsinglet import io as rio
from randsinglet.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_run_deterministic_files(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("run", "--n", 1, "--seed", 7, "--workers", 1, "-o", a) == 0
    assert run("run", "--n", 1, "--seed", 7, "--workers", 1, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()
    prov, records = rio.read_records(a)
    assert prov["config"]["seed"] == 7 and prov["version"]
    assert len(records) == 1


def test_run_output_independent_of_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("run", "-L", 30, "--n", 6, "--workers", 1, "-o", a)
    run("run", "-L", 30, "--n", 6, "--workers", 2, "-o", b)
    assert a.read_bytes() == b.read_bytes()


def test_run_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run("run", "-L", 20, "--n", 5, "--format", "json", "-o", out) == 0
    payload = json.loads(out.read_text())
    assert len(payload["records"]) == 5
    assert payload["columns"] == list(ens.CSV_COLUMNS)
    assert "fraction_F_gt_half" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["run", "--alpha", "1.5"],
    ["run", "--length", "31"],
    ["run", "--n", "0"],
    ["run", "--omega0", "0"],
    ["run", "--window-min", "40", "--window-max", "10"],
    ["survey", "--lc", "0.5"],
    ["oracle", "--lengths", "16"],
])
def test_config_errors(argv, tmp_path):
    assert main(argv + ["-o", str(tmp_path / "x")] if argv[0] != "oracle" else argv) == 1


def test_bad_choice_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--boundary", "twisted"])
    assert exc.value.code != 0


def test_survey_row_count(tmp_path):
    out = tmp_path / "s.csv"
    assert run("survey", "-L", 20, "--lc", 3, "--chains", 2, "--workers", 1, "-o", out) == 0
    _, header, rows = rio.read_table(out)
    assert tuple(header) == rio.SURVEY_COLUMNS
    assert len(rows) == 2 * 60


def test_clean_survey(tmp_path, capsys):
    out = tmp_path / "clean.csv"
    assert run("survey", "--clean", "-L", 100, "--lc", 17, "-o", out) == 0
    _, _, _, f = rio.read_fidelities(out)
    assert len(f) == len(ens.qualifying_pairs(100, 17)) and max(f) < 0.5


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(rio.OUTDIR_ENV, str(tmp_path))
    assert run("run", "-L", 20, "--n", 2, "--seed", 3, "--workers", 1) == 0
    assert (tmp_path / "records_a0p3_L20_s3.csv").exists()


def test_postprocessing(tmp_path):
    rec = tmp_path / "r.csv"
    assert run("run", "-L", 40, "--n", 40, "--workers", 1, "-o", rec) == 0
    h1, h2 = tmp_path / "h1.json", tmp_path / "h2.json"
    assert run("hist", rec, "--bins", 20, "-o", h1) == 0
    assert run("hist", rec, "--bins", 20, "-o", h2) == 0
    assert h1.read_bytes() == h2.read_bytes()
    hist = json.loads(h1.read_text())
    assert len(hist["edges"]) == 21 and hist["meta"]["L"] == 40
    cmp_out = tmp_path / "c.json"
    assert run("compare", rec, rec, "-o", cmp_out) == 0
    assert json.loads(cmp_out.read_text())["ks_D"] == 0.0
    # too few records for a fit
    assert run("fit", rec, "-o", tmp_path / "f.json") == 1


def test_fit_writes_gamma(tmp_path):
    rec = tmp_path / "r.csv"
    assert run("run", "--alpha", 0.0, "-L", 100, "--n", 300, "--workers", 1, "-o", rec) == 0
    out = tmp_path / "f.json"
    assert run("fit", rec, "--min-count", 5, "-o", out) == 0
    payload = json.loads(out.read_text())
    assert payload["gamma"] > 0 and payload["n_points"] >= 5


def test_bad_inputs(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run("hist", empty, "-o", tmp_path / "h.json") == 3
    junk = tmp_path / "junk.csv"
    junk.write_text("a,b\n1,2\n")
    assert run("hist", junk, "-o", tmp_path / "h.json") == 3
    assert run("fit", junk, "-o", tmp_path / "f.json") == 3
    assert run("hist", tmp_path / "missing.csv") == 3


def test_oracle_command(capsys):
    assert run("oracle", "--lengths", 4, 6, "--realizations", 3) == 0
    assert "PASS" in capsys.readouterr().out
    assert run("oracle", "--lengths", 4, "--realizations", 2, "--inject-fault") == 2
    assert "FAIL: worst" in capsys.readouterr().err
