import json

import numpy as np
import pytest
from printed_table import PRINTED_SCORES, printed_summaries

from estda.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main, parse_cli
from estda.engine import EdaConfig, RunRecord, run_eda
from estda.errors import ConfigError
from estda.harness import (
    ExperimentAborted,
    ExperimentSpec,
    SummaryStats,
    Variant,
    emit_density_comparison,
    emit_traces,
    reference_config,
    preset_spec,
    read_trace_csv,
    run_experiment,
    score_table,
    summarize,
)
from estda.objectives import get_function


def fake_record(best, failed=False, trace_len=3, algorithm="estda"):
    return RunRecord(
        algorithm=algorithm, function="ackley", dimension=2, seed=0, config={},
        best_value_trace=np.linspace(best + 2, best, trace_len),
        survival_component_trace=np.array([3, 2, 2][:trace_len]),
        final_best_point=np.zeros(2), final_best_value=best, failed=failed,
        error="boom" if failed else None,
    )


def stats(name, alg, mean, spread=0.0, dim=2):
    return SummaryStats(name, dim, alg, mean, spread, np.zeros(0), np.zeros(0), 30)


# --- summarize ---------------------------------------------------------------


def test_single_run_summary():
    s = summarize([fake_record(4.5)])
    assert s.mean_best == 4.5 and s.spread_best == 0.0 and s.run_count == 1


def test_summary_of_one_two_three():
    recs = [fake_record(v) for v in (1.0, 2.0, 3.0)]
    s = summarize(recs)
    assert s.mean_best == 2.0 and s.spread_best == pytest.approx(1.0)
    assert summarize(recs, "stderr").spread_best == pytest.approx(1 / np.sqrt(3))
    np.testing.assert_allclose(s.mean_trace, [4.0, 3.0, 2.0])
    np.testing.assert_allclose(s.mean_survival_trace, [3.0, 2.0, 2.0])


def test_failed_runs_are_excluded_and_counted():
    recs = [fake_record(float(v)) for v in range(9)] + [fake_record(100.0, failed=True)]
    s = summarize(recs)
    assert s.failed_count == 1 and s.run_count == 9 and s.mean_best == 4.0


def test_too_many_failures_abort():
    recs = [fake_record(1.0)] * 4 + [fake_record(1.0, failed=True)]
    with pytest.raises(ExperimentAborted, match="boom"):
        summarize(recs)


def test_mean_lies_between_run_extremes():
    fn = get_function("griewank")
    recs = [run_eda(EdaConfig(population_size=200, selection_size=40, max_iterations=5,
                              seed=s), fn) for s in range(5)]
    s = summarize(recs)
    bests = [r.final_best_value for r in recs]
    assert min(bests) <= s.mean_best <= max(bests)


# --- score table -------------------------------------------------------------


ALGS = ("estda", "emstda", "gaussian_eda", "gmm_eda")


def test_unique_winner_scores():
    table = score_table([stats("f", a, m) for a, m in zip(ALGS, (1.0, 2.0, 3.0, 4.0))])
    assert table == {"estda": 1, "emstda": 0, "gaussian_eda": 0, "gmm_eda": 0}


def test_tie_awards_nothing():
    table = score_table([stats("f", a, m) for a, m in zip(ALGS, (1.0, 1.0, 2.0, 3.0))])
    assert sum(table.values()) == 0
    near = score_table([stats("f", a, m) for a, m in zip(ALGS, (1.0, 1.00005, 2.0, 3.0))])
    assert sum(near.values()) == 0


def test_tied_means_broken_by_smaller_spread():
    group = [stats("f", a, m, s) for a, m, s in
             zip(ALGS, (0.0, 0.0, 0.0, 5.0), (1e-12, 0.0, 1e-11, 1.0))]
    assert score_table(group)["emstda"] == 1


def test_printed_table_reproduces_printed_scores():
    assert score_table(printed_summaries()) == PRINTED_SCORES


def test_score_total_bounded_by_problem_count():
    summ = printed_summaries()
    assert sum(score_table(summ).values()) <= len({(s.function, s.dimension) for s in summ})


# --- traces ---------------------------------------------------------------


@pytest.fixture(scope="module")
def emstda_batch():
    fn = get_function("ackley")
    return [run_eda(EdaConfig(algorithm="emstda", seed=s), fn) for s in range(5)]


def test_trace_file_layout_and_round_trip(tmp_path, emstda_batch):
    path = emit_traces(emstda_batch, tmp_path)
    assert path.name == "ackley_2d_emstda.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == "iteration,mean_best,mean_survival_components"
    assert len(lines) == 51
    it, best, comps = read_trace_csv(path)
    s = summarize(emstda_batch)
    np.testing.assert_array_equal(it, np.arange(1, 51))
    np.testing.assert_array_equal(best, s.mean_trace)
    np.testing.assert_array_equal(comps, s.mean_survival_trace)
    assert np.all(np.diff(best) <= 0)
    assert comps[-1] < comps[0]


def test_unwritable_trace_path(tmp_path, emstda_batch):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_traces(emstda_batch, blocker / "sub")


# --- density comparison ---------------------------------------------------


def test_density_comparison(tmp_path):
    path = emit_density_comparison([5, 50], tmp_path / "dens.csv")
    data = np.genfromtxt(path, delimiter=",", names=True)
    x = data["x"]
    assert len(x) == 1201 and x[0] == -6.0 and x[-1] == 6.0
    i0 = np.flatnonzero(x == 0.0)[0]
    assert data["normal"][i0] == pytest.approx(0.39894, abs=1e-5)
    for col in data.dtype.names[1:]:
        assert data[col].sum() * 0.01 == pytest.approx(1.0, abs=1e-3)
    i4 = np.flatnonzero(x == 4.0)[0]
    assert data["student_t_v5"][i4] > data["normal"][i4]


@pytest.mark.parametrize("v", [2, 1.5])
def test_density_comparison_rejects_infinite_variance(tmp_path, v):
    with pytest.raises(ConfigError, match="v > 2"):
        emit_density_comparison([5, v], tmp_path / "dens.csv")


# --- experiment ------------------------------------------------------------


def test_run_experiment_writes_outputs(tmp_path):
    spec = ExperimentSpec(problems=[("easom", 2)],
                          variants=[Variant.plain("estda"), Variant.plain("gmm_eda")],
                          run_count=2, out_dir=str(tmp_path),
                          config={"max_iterations": 3, "population_size": 100})
    summaries, records = run_experiment(spec)
    assert [s.algorithm for s in summaries] == ["estda", "gmm_eda"]
    assert [r.seed for r in records[("easom", 2, "estda")]] == [0, 1]
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["easom_2d_estda.csv", "easom_2d_estda.json", "easom_2d_gmm_eda.csv",
                     "easom_2d_gmm_eda.json", "scores.csv", "summary.csv"]
    saved = json.loads((tmp_path / "easom_2d_estda.json").read_text())
    assert saved[1]["seed"] == 1 and len(saved[1]["best_value_trace"]) == 3
    assert (tmp_path / "summary.csv").read_text().count("\n") == 3


def test_worker_count_does_not_change_results():
    kw = dict(problems=[("levy13", 2)], variants=[Variant.plain("estda")], run_count=3,
              config={"max_iterations": 4, "population_size": 100})
    one, _ = run_experiment(ExperimentSpec(**kw))
    two, _ = run_experiment(ExperimentSpec(workers=2, **kw))
    np.testing.assert_array_equal(one[0].mean_trace, two[0].mean_trace)


def test_variant_labels_and_overrides():
    spec = preset_spec("paper-fig2")
    labels = [v.label for v in spec.variants]
    assert labels[:2] == ["estda_v5", "estda_v10"] and labels[-1] == "gaussian_eda"
    assert spec.base_config("ackley", 2, spec.variants[2]).dof == 50.0


# --- configuration presets ------------------------------------------------


def test_reference_populations():
    for d, n in ((2, 1000), (5, 10_000), (10, 100_000)):
        cfg = reference_config("rastrigin", d, "estda")
        assert cfg.population_size == n and cfg.selection_size == n // 5


def test_large_problems_are_gated():
    with pytest.raises(ConfigError, match="allow-large"):
        ExperimentSpec(problems=[("rastrigin", 10)], variants=[Variant.plain("estda")])
    ExperimentSpec(problems=[("rastrigin", 10)], variants=[Variant.plain("estda")],
                   allow_large=True)


# --- CLI -------------------------------------------------------------------


def test_cli_single_problem():
    spec = parse_cli(["--function", "ackley", "--dim", "2", "--algorithm", "estda", "--dof", "5"])
    cfg = spec.base_config("ackley", 2, spec.variants[0])
    assert cfg.population_size == 1000 and cfg.selection_size == 200 and cfg.dof == 5.0
    assert spec.run_count == 30 and [v.algorithm for v in spec.variants] == ["estda"]


def test_cli_table_preset():
    spec = parse_cli(["--preset", "paper-table1"])
    assert len({f for f, _ in spec.problems}) == 17
    assert len(spec.variants) == 4
    assert all(d < 10 for _, d in spec.problems)
    for name, dim in spec.problems:
        cfg = spec.base_config(name, dim, spec.variants[0])
        assert cfg.dof == (50.0 if name == "rastrigin" else 5.0)
        assert cfg.population_size == {2: 1000, 5: 10_000}[dim]
    large = parse_cli(["--preset", "paper-table1", "--allow-large"])
    assert ("michalewicz", 10) in large.problems


def test_cli_selection_fraction():
    spec = parse_cli(["--function", "rastrigin", "--dim", "5", "--select-frac", "0.2",
                      "--pop", "10000"])
    assert spec.base_config("rastrigin", 5, spec.variants[0]).selection_size == 2000


@pytest.mark.parametrize(
    "argv",
    [
        ["--function", "sphere"],
        ["--function", "easom", "--dim", "5"],
        ["--function", "ackley", "--pop", "ten"],
        ["--function", "ackley", "--pop", "100", "--select-frac", "1.5"],
        ["--function", "ackley", "--algorithm", "emstda", "--weight-floor", "0.5"],
        ["--dim", "2"],
    ],
)
def test_cli_rejects_bad_input(argv):
    with pytest.raises(ConfigError):
        parse_cli(argv)


def test_cli_initialization_options():
    spec = parse_cli(["--function", "schwefel", "--init-mean", "uniform", "--init-width", "0.1"])
    cfg = spec.base_config("schwefel", 2, spec.variants[0])
    assert cfg.init_mean == "uniform" and cfg.init_width_fraction == 0.1


def test_cli_config_file_and_override(tmp_path):
    cfg_file = tmp_path / "c.json"
    cfg_file.write_text(json.dumps({"function": "griewank", "pop": 500, "weight-floor": 0.05,
                                    "runs": 4}))
    spec = parse_cli(["--config", str(cfg_file), "--pop", "800"])
    cfg = spec.base_config("griewank", 2, spec.variants[0])
    assert cfg.population_size == 800 and cfg.selection_size == 160
    assert cfg.weight_floor == 0.05 and spec.run_count == 4


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["--function", "nope"]) == EXIT_USAGE
    assert "configuration error" in capsys.readouterr().err
    blocker = tmp_path / "f"
    blocker.write_text("")
    small = ["--function", "easom", "--algorithm", "estda", "--runs", "1", "--iters", "2",
             "--pop", "50"]
    assert main(small + ["--out", str(blocker / "x")]) == EXIT_IO
    assert main(small + ["--out", str(tmp_path / "ok")]) == EXIT_OK
    assert (tmp_path / "ok" / "easom_2d_estda.csv").exists()
