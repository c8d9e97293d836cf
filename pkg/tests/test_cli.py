import json

import pytest

from bqsm.cli import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_honest_qot_run(capsys):
    code, out, _ = run(capsys, "run", "--protocol", "qot", "--n", "6", "--strategy", "honest", "--trials", "2000", "--seed", "7")
    assert code == EXIT_OK
    assert '"seed": 7' in out
    assert "PASS                wrong output given a=1: 0 <= 0" in out


def test_binding_run_writes_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "--protocol", "comm", "--n", "8", "--strategy", "measure_all:0", "--trials", "2000",
                       "--out", str(tmp_path), "--transcripts", "2")
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["config"]["strategy"] == "measure_all:0" and doc["seed"] == 0
    binding = next(r for r in doc["reports"] if r["name"].startswith("binding"))
    assert abs(binding["lhs"] - (1 + 0.75 ** 8)) <= 4 * binding["sigma"]
    assert sorted(p.name for p in (tmp_path / "transcripts").iterdir()) == ["000.json", "001.json"]


def test_outputs_byte_identical(capsys, tmp_path):
    args = ["run", "--protocol", "epr_qot", "--n", "4", "--strategy", "bell_xor", "--trials", "200", "--seed", "3",
            "--transcripts", "1", "--format", "csv"]
    run(capsys, *args, "--out", str(tmp_path / "a"))
    run(capsys, *args, "--out", str(tmp_path / "b"))
    for name in ("report.csv", "transcripts/000.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert (tmp_path / "a" / "report.csv").read_text().startswith("# config: ")


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"protocol": "qot", "n": 3, "trials": 50, "seed": 1}))
    code, out, _ = run(capsys, "run", "--config", str(cfg), "--seed", "9")
    assert code == EXIT_OK and '"n": 3' in out and '"seed": 9' in out
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "run", "--config", str(cfg))[0] == EXIT_CONFIG


@pytest.mark.parametrize("argv", [
    ["run", "--n", "0"],
    ["run", "--gamma", "1.5"],
    ["run", "--protocol", "bb84_qot", "--phi", "0.6"],
    ["run", "--memory", "erasure:2"],
    ["run", "--strategy", "store_subset:x"],
    ["run", "--protocol", "comm", "--strategy", "bounded:9:9"],
    ["verify", "--criteria", "13"],
])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_CONFIG


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--protocol", "nope"])
    assert exc.value.code == EXIT_CONFIG


def test_uncertainty_check(capsys):
    code, out, _ = run(capsys, "run", "--check", "uncertainty", "--n", "4", "--samples", "500")
    assert code == EXIT_OK and out.count("PASS") == 2


@pytest.mark.parametrize("check", ["minentropy", "pmax", "smallsets", "pa", "ball", "sender_privacy", "binding", "thresholds"])
def test_other_checks_run(capsys, check):
    code, _, _ = run(capsys, "run", "--check", check, "--n", "4", "--samples", "20", "--trials", "100", "--gamma", "0.25",
                     "--strategy", "honest")
    assert code == EXIT_OK


def test_hypothesis_violation_is_not_a_failure(capsys):
    code, out, err = run(capsys, "verify", "--gamma", "0.9", "--protocol", "comm", "--criteria", "10")
    assert code == EXIT_OK
    assert "HYPOTHESIS-VIOLATED comm memory fraction below threshold" in out
    assert "not below" in err


def test_threshold_clamp_warns(capsys):
    code, out, err = run(capsys, "verify", "--protocol", "bb84_qot", "--phi", "0.3", "--eta", "0.5", "--criteria", "10")
    assert code == EXIT_OK and "clamped to 0" in err


def test_bound_violation_exit_code(capsys, monkeypatch):
    from bqsm import cli
    from bqsm.analysis.reports import BoundReport

    monkeypatch.setattr(cli, "run_check", lambda cfg: [BoundReport("forced", 2.0, 1.0)])
    assert run(capsys, "run", "--check", "pa")[0] == EXIT_VIOLATION
