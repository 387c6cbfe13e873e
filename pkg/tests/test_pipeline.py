import itertools
import json
import subprocess
import sys

import numpy as np
import pytest

from mofs.cli import main
from mofs.config import Config, ConfigError
from mofs.dataset import DataError, generate_synthetic, stratified_folds, write_csv
from mofs.evaluator import Fitness, MaskEvaluator
from mofs.kernels import front_ranks
from mofs.moea import Solution
from mofs.pipeline import (
    REPORT_KEYS,
    ParetoEntry,
    RunResult,
    aggregate,
    dumps,
    emit_report,
    load_report,
    run_pipeline,
    run_repeats,
    sweep,
    sweep_front,
)

SMALL = Config(population_size=8, max_generations=5, seed=2)


@pytest.fixture(scope="module")
def small_data():
    return generate_synthetic(60, 2, 2, 4, 2.0, 0.8, seed=1)


@pytest.fixture(scope="module")
def small_result(small_data):
    return run_pipeline(small_data, None, SMALL)


class TestRunPipeline:
    def test_byte_identical_reports(self, small_data, small_result):
        again = run_pipeline(small_data, None, SMALL)
        assert dumps(again.to_dict()) == dumps(small_result.to_dict())

    def test_cap_zero(self, small_data):
        r = run_pipeline(small_data, None, SMALL.replace(max_generations=0))
        assert r.terminated_by == "cap"
        assert r.generations_run == 0 and r.dissimilarity_trace == []
        assert len(r.snapshots) == 1

    def test_result_invariants(self, small_result):
        r = small_result
        assert 0 <= r.selected.index < len(r.pareto_front)
        assert list(r.selected.feature_indices) == np.flatnonzero(r.selected_mask).tolist()
        assert len(r.dissimilarity_trace) == r.generations_run
        assert all(np.isfinite(d) and d >= 0 for d in r.dissimilarity_trace)
        assert r.terminated_by in ("metc", "cap")
        ranks = front_ranks(np.array([e.fitness.objectives for e in r.pareto_front]))
        assert np.all(ranks == 0)

    def test_cv_metrics_match_front_entry(self, small_result):
        r = small_result
        assert r.selected.evaluated_on == "cv"
        assert r.selected.metrics == r.pareto_front[r.selected.index].fitness

    def test_held_out_scoring(self, small_data):
        test = generate_synthetic(60, 2, 2, 4, 2.0, 0.8, seed=9)
        r = run_pipeline(small_data, test, SMALL)
        cm = r.confusion
        assert r.selected.evaluated_on == "test"
        assert cm.tp + cm.fn == int(test.y.sum()) and cm.tn + cm.fp == int((test.y == 0).sum())

    def test_mismatched_test_columns(self, small_data):
        other = generate_synthetic(20, 1, 0, 1, 1.0, 0.0, seed=0)
        with pytest.raises(DataError):
            run_pipeline(small_data, other, SMALL)

    def test_two_strong_features_are_kept(self):
        hits = 0
        for seed in range(10):
            d = generate_synthetic(120, 2, 0, 8, 1.5, 0.0, seed=seed)
            r = run_pipeline(d, None, Config(population_size=20, max_generations=40, seed=seed))
            hits += {0, 1} <= set(r.selected.feature_indices)
        assert hits >= 8

    def test_strong_features_in_every_optimal_mask(self):
        d = generate_synthetic(120, 2, 0, 8, 1.5, 0.0, seed=0)
        ev = MaskEvaluator(d, stratified_folds(d, 2, 0))
        masks = [np.array(bits, dtype=bool) for bits in itertools.product([0, 1], repeat=10) if any(bits)]
        ranks = front_ranks(np.array([ev(m).objectives for m in masks]))
        optimal = [m for m, r in zip(masks, ranks) if r == 0]
        assert optimal and all(m[0] and m[1] for m in optimal)

    def test_repeats_and_aggregate(self, small_data):
        runs = run_repeats(small_data, None, SMALL, 3)
        assert [r.seed for r in runs] == [2, 3, 4]
        agg = aggregate(runs)
        aucs = [r.selected.metrics.auc for r in runs]
        assert agg["auc"]["mean"] == pytest.approx(np.mean(aucs))
        assert agg["auc"]["std"] == pytest.approx(np.std(aucs))
        with pytest.raises(ConfigError):
            run_repeats(small_data, None, SMALL, 0)


class TestReport:
    def test_key_order(self, small_result, tmp_path):
        emit_report(small_result, tmp_path / "r.json")
        doc = json.loads((tmp_path / "r.json").read_text())
        assert tuple(doc) == REPORT_KEYS
        entry = doc["pareto_front"][0]
        assert list(entry)[:5] == ["mask", "sen", "spe", "auc", "acc"]
        assert set(entry["mask"]) <= {"0", "1"}

    def test_round_trip(self, small_result, tmp_path):
        emit_report(small_result, tmp_path / "r.json")
        back = load_report(tmp_path / "r.json")
        assert dumps(back.to_dict()) == dumps(small_result.to_dict())
        assert back.config == small_result.config

    def test_confusion_rederives_rates(self, small_result):
        doc = json.loads(dumps(small_result.to_dict()))
        c, m = doc["confusion"], doc["selected"]["metrics"]
        assert abs(c["tp"] / (c["tp"] + c["fn"]) - m["sensitivity"]) <= 1e-12
        assert abs(c["tn"] / (c["tn"] + c["fp"]) - m["specificity"]) <= 1e-12

    def test_minimal_single_solution(self):
        mask = np.array([True, False])
        fit = Fitness(0.5, 0.5, 0.5, 0.5)
        entries = [ParetoEntry(mask, fit, 1.0, [[0.0, 1.0]] * 4)]
        from mofs.evaluator import ConfusionMatrix
        from mofs.pipeline import Selected

        r = RunResult("x", 0, Config(), 0, "cap", [], entries, Selected(0, 1.0, (0,), fit, "cv"),
                      ConfusionMatrix(1, 1, 1, 1))
        doc = json.loads(dumps(r.to_dict()))
        assert tuple(doc) == REPORT_KEYS


class TestSweep:
    def test_row_counts(self, small_data):
        assert len(sweep(small_data, SMALL, "weights")) == 4
        rows = sweep(small_data, SMALL, "refpoints")
        assert [r["N"] for r in rows] == list(range(5, 12))

    def test_weight_rows_sum_to_one(self, small_data):
        for row in sweep(small_data, SMALL, "weights"):
            assert sum(row["weights"]) == pytest.approx(1.0, abs=1e-9)

    def test_dominant_solution_is_stable(self):
        def s(sen, spe, auc):
            return Solution(np.array([True]), Fitness(sen, spe, auc, (sen + spe) / 2))

        front = [s(0.7, 0.6, 0.7), s(0.9, 0.9, 0.95), s(0.6, 0.8, 0.75)]
        for param in ("weights", "refpoints"):
            assert {row["index"] for row in sweep_front(front, param, Config())} == {1}

    def test_unknown_param(self, small_data):
        with pytest.raises(ConfigError):
            sweep(small_data, SMALL, "mutation")


class TestConfig:
    @pytest.mark.parametrize(
        "changes",
        [
            dict(population_size=1),
            dict(n_b=1),
            dict(cv_folds=1),
            dict(smoler_weights=(0.5, 0.5, 0.5, 0.5)),
            dict(termination_mode="never"),
            dict(clone_budget=3),
        ],
    )
    def test_invalid(self, changes):
        with pytest.raises(ConfigError):
            Config(**changes)

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown"):
            Config.from_dict({"population_sz": 10})

    def test_dict_round_trip(self):
        cfg = Config(population_size=12, smoler_weights=(0.25, 0.25, 0.25, 0.25), gamma=0.5)
        assert Config.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


class TestCli:
    @pytest.fixture
    def csv_path(self, tmp_path):
        p = tmp_path / "d.csv"
        assert main(["datagen", "--samples", "40", "--informative", "2", "--redundant", "1",
                     "--noise", "3", "--delta", "2", "--rho", "0.8", "--seed", "4", "--out", str(p)]) == 0
        return p

    @pytest.fixture
    def cfg_path(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"population_size": 6, "max_generations": 3}))
        return p

    def test_run_is_byte_identical(self, tmp_path, csv_path, cfg_path):
        args = ["run", "--data", str(csv_path), "--label-col", "label", "--config", str(cfg_path), "--seed", "7"]
        assert main(args + ["--out", str(tmp_path / "a.json")]) == 0
        assert main(args + ["--out", str(tmp_path / "b.json")]) == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        assert json.loads((tmp_path / "a.json").read_text())["seed"] == 7

    def test_run_repeats(self, tmp_path, csv_path, cfg_path):
        out = tmp_path / "r.json"
        args = ["run", "--data", str(csv_path), "--label-col", "label", "--config", str(cfg_path),
                "--repeats", "2", "--out", str(out)]
        assert main(args) == 0
        doc = json.loads(out.read_text())
        assert len(doc["runs"]) == 2 and "auc" in doc["aggregate"]

    @pytest.mark.parametrize("method", ["sfs", "relief"])
    def test_baseline(self, tmp_path, csv_path, method):
        out = tmp_path / "b.json"
        assert main(["baseline", "--method", method, "--data", str(csv_path), "--label-col", "label",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["method"] == method and doc["selected"]["feature_indices"]

    def test_sweep(self, tmp_path, csv_path):
        out = tmp_path / "s.json"
        cfg_args = ["sweep", "--param", "weights", "--data", str(csv_path), "--label-col", "label"]
        assert main(cfg_args + ["--out", str(out)]) == 0
        assert len(json.loads(out.read_text())["rows"]) == 4

    def test_bad_config_exit_code(self, tmp_path, csv_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"mystery": 1}))
        code = main(["run", "--data", str(csv_path), "--label-col", "label", "--config", str(bad),
                     "--out", str(tmp_path / "o.json")])
        assert code == 2

    def test_bad_data_exit_code(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("a,label\n1,2\n3,0\n")
        assert main(["run", "--data", str(p), "--label-col", "label", "--out", str(tmp_path / "o.json")]) == 3

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--data", "x.csv"])
        assert exc.value.code == 2

    def test_module_entry_point(self, tmp_path):
        out = tmp_path / "g.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "mofs.cli", "datagen", "--samples", "10", "--informative", "1",
             "--redundant", "0", "--noise", "1", "--delta", "1", "--rho", "0", "--seed", "0", "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0 and out.read_text().startswith("f0,f1,label")

    def test_written_csv_matches_generator(self, tmp_path):
        out = tmp_path / "g.csv"
        main(["datagen", "--samples", "10", "--informative", "1", "--redundant", "0", "--noise", "1",
              "--delta", "1", "--rho", "0", "--seed", "0", "--out", str(out)])
        expected = tmp_path / "e.csv"
        write_csv(generate_synthetic(10, 1, 0, 1, 1.0, 0.0, 0), expected)
        assert out.read_bytes() == expected.read_bytes()
