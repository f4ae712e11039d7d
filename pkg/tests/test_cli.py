"""CLI subcommands end to end."""

import json
import os


from uqdbench import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_tasks(capsys):
    code, out, _ = run_cli(capsys, "list-tasks")
    assert code == 0
    for name in ("noise-free", "gaussian-fitness", "pheno-j", "two-sigma-descriptor"):
        assert name in out
    assert "me-sampling-repro" in out


def small_config(tmp_path, **extra):
    doc = {
        "tasks": ["gaussian-fitness"],
        "algos": ["me"],
        "replications": 1,
        "master_seed": 5,
        "solver": {"eval_budget": 1500, "init_batch": 16, "batch_size": 16,
                   "n_samples": 5, "metric_period": 10},
        "n_reeval": 10,
    }
    doc.update(extra)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(doc))
    return p


def test_run_and_summarize(tmp_path, capsys):
    cfg = small_config(tmp_path)
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(capsys, "run", "--config", str(cfg), "--out", str(out_dir))
    assert code == 0
    assert "completed 1 run(s)" in out
    assert (out_dir / "metrics.csv").exists()

    code, out, _ = run_cli(capsys, "summarize", "--in", str(out_dir))
    assert code == 0
    assert (out_dir / "summary.csv").exists()


def test_run_bad_config_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"tasks": ["no-such-task"], "algos": ["me"]}))
    code, _, err = run_cli(capsys, "run", "--config", str(p))
    assert code == 2
    assert "unknown task" in err


def test_run_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "run", "--config", str(tmp_path / "none.json"))
    assert code == 1
    assert "error" in err


def test_correct_subcommand(tmp_path, capsys):
    cfg = small_config(tmp_path)
    out_dir = tmp_path / "out"
    run_cli(capsys, "run", "--config", str(cfg), "--out", str(out_dir))
    archive_csv = out_dir / "gaussian-fitness" / "me" / "rep0" / "archive_illusory.csv"
    code, out, _ = run_cli(capsys, "correct", "--archive", str(archive_csv),
                           "--task", "gaussian-fitness", "--reevals", "10",
                           "--out", str(tmp_path / "corr.csv"))
    assert code == 0
    assert (tmp_path / "corr.csv").exists()
    assert (tmp_path / "corr_repro.csv").exists()
    assert "corrected_qd_score" in out

    # same pass twice is deterministic
    code, out2, _ = run_cli(capsys, "correct", "--archive", str(archive_csv),
                            "--task", "gaussian-fitness", "--reevals", "10",
                            "--out", str(tmp_path / "corr2.csv"))
    assert (tmp_path / "corr.csv").read_bytes() == (tmp_path / "corr2.csv").read_bytes()


def test_correct_wrong_grid(tmp_path, capsys):
    cfg = small_config(tmp_path)
    out_dir = tmp_path / "out"
    run_cli(capsys, "run", "--config", str(cfg), "--out", str(out_dir))
    archive_csv = out_dir / "gaussian-fitness" / "me" / "rep0" / "archive_illusory.csv"
    code, _, err = run_cli(capsys, "correct", "--archive", str(archive_csv),
                           "--task", "gaussian-fitness", "--grid", "10x10")
    assert code == 2
    assert "resolution" in err


def test_bench_smoke(capsys):
    code, out, _ = run_cli(capsys, "bench", "--size", "20000")
    assert code == 0
    assert "philox_many" in out and "fk_xy" in out
