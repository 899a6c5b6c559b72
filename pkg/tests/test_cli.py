import json

from rawsim.cli import cli
from rawsim.topology import load_placement


def test_gen_writes_loadable_placement(tmp_path):
    out = tmp_path / "placement.txt"
    assert cli(["gen", "--n", "25", "--seed", "3", "--out", str(out)]) == 0
    positions = load_placement(out.read_text())
    assert positions.shape == (25, 2)


def test_run_missing_config_exits_2(tmp_path):
    code = cli(["run", "--config", str(tmp_path / "missing.file")])
    assert code == 2


def test_run_with_config_file(tmp_path):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(
        "n = 15\n"
        "horizon_s = 40\n"
        "sink_start_s = 20\n"
        "sink_gap_s = 2\n"
        "# comment line\n"
        "view_policy = size:4\n"
    )
    out = tmp_path / "results"
    assert cli(["run", "--config", str(cfg), "--seed", "7", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 7
    assert summary["config"]["n"] == 15
    assert (out / "trace.csv").read_text().startswith("time_s,active_count")
    sink_header = (out / "sink.csv").read_text().splitlines()[0]
    assert sink_header == (
        "visit_index,node_id,time_s,entries_collected,"
        "new_origins,cumulative_origins,coverage"
    )


def test_set_override_and_bad_key(tmp_path):
    out = tmp_path / "r"
    assert cli(["run", "--set", "n=12", "--set", "horizon_s=20",
                "--set", "sink_start_s=10", "--set", "sink_gap_s=1",
                "--out", str(out), "--seed", "1"]) == 0
    assert cli(["run", "--set", "nonsense=1", "--out", str(out)]) == 2


def test_unknown_flag_exits_2():
    assert cli(["run", "--frobnicate"]) == 2


def test_unknown_subcommand_exits_2():
    assert cli(["wat"]) == 2


def test_sweep_deterministic(tmp_path):
    args = [
        "sweep", "--param", "delta", "--values", "0.0,0.5",
        "--runs", "2", "--seed", "11",
        "--set", "n=20", "--set", "dissemination_enabled=false",
        "--set", "sink_enabled=false", "--set", "horizon_s=50",
    ]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert cli(args + ["--out", str(a)]) == 0
    assert cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_aggregates_summaries(tmp_path):
    for i in range(2):
        out = tmp_path / f"run{i}"
        assert cli(["run", "--set", "n=12", "--set", "horizon_s=30",
                    "--set", "sink_start_s=15", "--set", "sink_gap_s=1",
                    "--seed", str(i), "--out", str(out)]) == 0
    report = tmp_path / "report.csv"
    assert cli(["report", str(tmp_path / "run0" / "summary.json"),
                str(tmp_path / "run1" / "summary.json"),
                "--out", str(report)]) == 0
    lines = report.read_text().splitlines()
    assert lines[0] == "metric,mean,stddev,count"
    assert any(line.startswith("coverage,") for line in lines)
