import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

EXAMPLE = str(resources.files("rocketeval.data") / "example_design.json")


def run_cli(*args, **kwargs):
    return subprocess.run([sys.executable, "-m", "rocketeval.cli", *args],
                          capture_output=True, text=True, timeout=600, **kwargs)


def test_validate_example_passes():
    r = run_cli("validate", EXAMPLE)
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["passed"] is True
    assert report["violations"] == []


def test_validate_bad_design_still_exits_zero(tmp_path):
    data = json.loads(Path(EXAMPLE).read_text())
    data["aerodynamics"]["tail"]["top_radius"] = data["aerodynamics"]["tail"]["bottom_radius"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    r = run_cli("validate", str(bad))
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["passed"] is False


def test_simulate_outputs_outcome_json(tmp_path):
    trace = tmp_path / "trace.csv"
    r = run_cli("simulate", EXAMPLE, "--wind", "5@E", "--trace", str(trace))
    assert r.returncode == 0
    outcome = json.loads(r.stdout)
    assert outcome["apogee"] > 1000.0
    assert trace.exists()
    header = trace.read_text().splitlines()[0]
    assert header == "t,x,y,z,vx,vy,vz,mass,phase"


def test_score_equal_tail_radii_scores_zero(tmp_path):
    data = json.loads(Path(EXAMPLE).read_text())
    data["aerodynamics"]["tail"]["top_radius"] = data["aerodynamics"]["tail"]["bottom_radius"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    r = run_cli("score", str(bad), "--task", "altitude", "--target", "3048")
    assert r.returncode == 0
    reward = json.loads(r.stdout)
    assert reward["total"] == 0.0
    assert reward["failure"] == "drc_failed"


def test_unknown_flag_usage_error():
    r = run_cli("score", EXAMPLE, "--no-such-flag")
    assert r.returncode == 2


def test_missing_design_file_io_error():
    r = run_cli("validate", "/nonexistent/design.json")
    assert r.returncode == 3
    assert r.stdout == ""


def test_unparseable_design_domain_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("this is not json or a config block")
    r = run_cli("validate", str(bad))
    assert r.returncode == 1


def test_stdout_is_pure_json():
    r = run_cli("score", EXAMPLE, "--task", "altitude", "--target", "3048",
                "--wind", "5@E")
    json.loads(r.stdout)  # exactly one parseable document


def test_catalog_subcommand():
    r = run_cli("catalog")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert len(data["motors"]) == 7
    assert len(data["materials"]) == 7


def test_brief_subcommand():
    r = run_cli("brief", "--task", "altitude", "--target", "3048", "--wind", "5@E")
    assert r.returncode == 0
    assert "**Target Apogee**: 3048.0 meters" in r.stdout


def test_bench_run_example_agent(tmp_path):
    out = tmp_path / "session.json"
    r = run_cli("bench", "run", "--task", "altitude", "--target", "3048",
                "--wind", "5@E", "--agent", "example", "--iters", "2",
                "--out", str(out))
    assert r.returncode == 0
    summary = json.loads(r.stdout)
    assert summary["attempts"] == 2
    assert out.exists()
    session = json.loads(out.read_text())
    assert len(session["attempts"]) == 2


def test_bench_scoreboard(tmp_path):
    out = tmp_path / "s1.json"
    run_cli("bench", "run", "--task", "altitude", "--target", "3048",
            "--agent", "example", "--iters", "1", "--out", str(out))
    r = run_cli("bench", "scoreboard", str(tmp_path))
    assert r.returncode == 0
    board = json.loads(r.stdout)
    assert len(board["agents"]) == 1


def test_optimize_seed_reproducible(tmp_path):
    args = ("optimize", "--algo", "random", "--budget", "3", "--task", "altitude",
            "--target", "3048", "--wind", "5@E", "--seed", "7")
    a = run_cli(*args, "--out", str(tmp_path / "a.json"))
    b = run_cli(*args, "--out", str(tmp_path / "b.json"))
    assert a.returncode == b.returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    sa = json.loads(a.stdout)
    sb = json.loads(b.stdout)
    assert sa["best_total"] == sb["best_total"]


def test_config_file_provides_defaults(tmp_path):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"target": 3048, "wind": "5@E"}))
    r = run_cli("--config", str(config), "score", EXAMPLE, "--task", "altitude")
    assert r.returncode == 0
    json.loads(r.stdout)


def test_flags_beat_config_file(tmp_path):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"target": 1000}))
    r = run_cli("--config", str(config), "brief", "--task", "altitude",
                "--target", "3048")
    assert "3048.0 meters" in r.stdout
