import csv
import io
import json

import pytest

from cliquetopo import cli, harness
from cliquetopo.graph import derive_seed
from cliquetopo.harness import (
    SUMMARY_COLUMNS,
    TIMING_COLUMNS,
    TRIAL_COLUMNS,
    ConfigError,
    ExperimentConfig,
    binomial_se,
    crossing_point,
    parse_config,
    records_csv,
    run_experiment,
    strip_timing,
    summary_csv,
    threshold_sweep,
)
from cliquetopo.plotting import plot_sweep

SMALL = ExperimentConfig((30,), (-0.6, -0.4), trials=3, base_seed=5,
                         metrics=("dimension", "betti_gf2", "betti_q", "collapse", "minimal_cycle",
                                  "bubble", "odd_torsion_screen", "patterns:k4+triangle"))


# -- config -------------------------------------------------------------------


def test_parse_config_roundtrip():
    text = """
    # sample sweep
    n = 30, 40
    alpha = -0.6, -0.5   # two cells
    trials = 4
    seed = 9
    metrics = dimension, patterns:k4+s2
    time_budget = none
    check_collapse_betti = yes
    """
    cfg = parse_config(text)
    assert cfg.n_values == (30, 40) and cfg.alpha_values == (-0.6, -0.5)
    assert cfg.pattern_names == ["k4", "s2"] and cfg.check_collapse_betti
    assert parse_config(cfg.to_text()) == cfg


def test_parse_config_overrides():
    cfg = parse_config("n = 10\nalpha = -0.5\n", {"trials": 7, "base_seed": None})
    assert cfg.trials == 7 and cfg.base_seed == 0


@pytest.mark.parametrize("text", [
    "n = 10\n",
    "n = 10\nalpha = 0.5\n",
    "n = 10\nalpha = -0.5\ntrials = 0\n",
    "n = 10\nalpha = -0.5\nmetrics = nonsense\n",
    "n = 10\nalpha = -0.5\nmetrics = patterns:nope\n",
    "n = 10\nalpha = -0.5\ncolour = red\n",
    "n = ten\nalpha = -0.5\n",
    "just words\n",
    "n = 10\nalpha = -0.5\ncheck_collapse_betti = maybe\n",
])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_seed_derivation_is_stable():
    assert derive_seed(0, 30, 0, 0) == derive_seed(0, 30, 0, 0)
    seeds = {derive_seed(1, n, a, t) for n in (10, 20) for a in range(3) for t in range(5)}
    assert len(seeds) == 30


# -- experiment ---------------------------------------------------------------


def test_trial_columns_fixed_order():
    cols = harness.trial_columns(SMALL)
    assert tuple(cols[: len(TRIAL_COLUMNS)]) == TRIAL_COLUMNS
    assert cols[-1] == "wall_time_s"


def test_rerun_is_byte_identical_without_timing():
    a = run_experiment(SMALL)
    b = run_experiment(SMALL)
    assert strip_timing(records_csv(SMALL, a.records)) == strip_timing(records_csv(SMALL, b.records))
    assert summary_csv(a.summary) == summary_csv(b.summary)
    assert a.failures == 0
    header = next(csv.reader(io.StringIO(strip_timing(records_csv(SMALL, a.records)))))
    assert not set(TIMING_COLUMNS) & set(header)


def test_workers_do_not_change_results():
    cfg2 = ExperimentConfig(SMALL.n_values, SMALL.alpha_values, SMALL.trials, SMALL.base_seed,
                            SMALL.metrics, workers=2)
    a, b = run_experiment(SMALL), run_experiment(cfg2)
    assert strip_timing(records_csv(SMALL, a.records)) == strip_timing(records_csv(cfg2, b.records))


def test_summary_rows_carry_se_and_counts():
    res = run_experiment(SMALL)
    for row in res.summary:
        assert row.trials_used == 3 and row.se is not None
    r = res.lookup(30, -0.6, "collapse", "P(collapsed_to_graph)")
    assert r.se == pytest.approx(binomial_se(r.value, 3))
    header = summary_csv(res.summary).splitlines()[0].split(",")
    assert tuple(header) == SUMMARY_COLUMNS


def test_empty_metrics_only_timing():
    res = run_experiment(ExperimentConfig((20,), (-0.5,), trials=2))
    assert all(r.values == {} and r.wall_time_s >= 0 for r in res.records)
    assert harness.trial_columns(res.config) == list(TRIAL_COLUMNS) + ["wall_time_s"]


def test_failed_trials_are_isolated(monkeypatch):
    calls = []
    real = harness.compute_metrics

    def boom(cfg, rec):
        calls.append(rec.trial)
        if rec.trial == 1:
            raise RuntimeError("synthetic")
        real(cfg, rec)

    monkeypatch.setattr(harness, "compute_metrics", boom)
    res = run_experiment(ExperimentConfig((20,), (-0.5,), trials=3, metrics=("dimension",)))
    assert calls == [0, 1, 2]
    assert [r.status for r in res.records] == ["ok", "failed", "ok"]
    assert "synthetic" in res.records[1].error and res.failures == 1


def test_json_records():
    res = run_experiment(SMALL)
    doc = res.records[0].to_json()
    json.dumps(doc)
    assert doc["seed"] == derive_seed(5, 30, 0, 0)


def test_binomial_se_and_crossing():
    assert binomial_se(0.5, 100) == pytest.approx(0.05)
    assert binomial_se(0.0, 10) == 0.0
    assert crossing_point([-0.8, -0.7, -0.6], [0.0, 0.25, 0.75]) == pytest.approx(-0.65)
    assert crossing_point([-0.8, -0.7], [0.6, 0.9]) is None


def test_sweep_and_svg_determinism(tmp_path):
    sw = threshold_sweep("triangle", 60, [-1.2, -1.0, -0.8], trials=6, seed=2)
    assert [p.trials_used for p in sw.points] == [6, 6, 6]
    assert sw.marker == -1.0 and sw.monotone
    a = plot_sweep(sw, tmp_path / "a.svg").read_bytes()
    b = plot_sweep(sw, tmp_path / "b.svg").read_bytes()
    assert a == b and b"<svg" in a
    assert sw.to_csv().splitlines()[0].startswith("pattern,n,alpha,frequency,se")


# -- CLI ------------------------------------------------------------------------


def _run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_cli_sample_and_invariants(capsys):
    code, out = _run(["sample", "--n", "12", "--alpha", "-0.3", "--seed", "1"], capsys)
    assert code == 0 and out.out.strip()
    code, out = _run(["invariants", "--fixture", "rp2_11", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out.out)
    assert doc["betti_gf2"] == [1, 1, 1]


def test_cli_collapse_trace(tmp_path, capsys):
    trace = tmp_path / "t" / "trace.txt"
    code, out = _run(["collapse", "--fixture", "disc_r5", "--trace", str(trace)], capsys)
    assert code == 0 and "collapsed_to_graph" in out.out
    assert trace.read_text().startswith("COLLAPSE ")


def test_cli_count(capsys):
    code, out = _run(["count", "--fixture", "tetrahedron_boundary", "--pattern", "triangle", "--cap", "0"], capsys)
    assert code == 0 and "24" in out.out


def test_cli_experiment_csv(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("n = 25\nalpha = -0.7, -0.5\ntrials = 3\nmetrics = dimension, collapse\n")
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert _run(["experiment", "--config", str(cfg), "--out", str(out1)], capsys)[0] == 0
    assert _run(["experiment", "--config", str(cfg), "--out", str(out2)], capsys)[0] == 0
    for name in ("trials.csv",):
        assert strip_timing((out1 / name).read_text()) == strip_timing((out2 / name).read_text())
    assert (out1 / "summary.csv").read_text() == (out2 / "summary.csv").read_text()
    assert (out1 / "summary.svg").read_bytes() == (out2 / "summary.svg").read_bytes()


def test_cli_experiment_flags_json(tmp_path, capsys):
    out = tmp_path / "j"
    code, _ = _run(["experiment", "--n", "20", "--alpha", "-0.7,-0.6", "--trials", "2",
                    "--metrics", "dimension", "--format", "json", "--out", str(out), "--no-plot"], capsys)
    assert code == 0
    doc = json.loads((out / "results.json").read_text())
    assert doc["schema"] == harness.SCHEMA_VERSION and len(doc["records"]) == 4


@pytest.mark.parametrize("argv", [
    ["experiment", "--n", "20", "--alpha", "0.5", "--trials", "2"],
    ["experiment", "--n", "20", "--alpha", "-0.5", "--metrics", "bogus"],
    ["experiment", "--config", "/nonexistent/file.cfg"],
    ["count", "--fixture", "octahedron", "--pattern", "no_such_pattern"],
    ["invariants", "--n", "0", "--alpha", "-0.5"],
])
def test_cli_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2


def test_cli_partial_failure_exit_3(tmp_path, monkeypatch, capsys):
    real = harness.compute_metrics

    def boom(cfg, rec):
        if rec.trial == 0:
            raise RuntimeError("synthetic")
        real(cfg, rec)

    monkeypatch.setattr(harness, "compute_metrics", boom)
    code = cli.main(["experiment", "--n", "20", "--alpha", "-0.5", "--trials", "2",
                     "--out", str(tmp_path), "--no-plot"])
    assert code == 3


def test_cli_sweep(tmp_path, capsys):
    code, _ = _run(["sweep", "--pattern", "triangle", "--n", "40", "--alphas", "-1.1,-0.9",
                    "--trials", "3", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert (tmp_path / "sweep_triangle_n40.csv").exists()
    assert (tmp_path / "sweep_triangle_n40.svg").exists()
