import dataclasses
import json
import os
import shutil

import numpy as np
import pytest

import corbf
from corbf import cli
from corbf.bench import (ARCHITECTURES, IRIS_INFLUENCE, MANIFEST_NAME,
                         TASK_DEFAULTS, TASKS, ExperimentConfig, bound_probe,
                         compare_report, config_from_manifest, curve_name,
                         expected_artifacts, mean_curve_name,
                         read_surface_csv, read_test_errors_csv,
                         run_experiment)
from corbf.errors import InvalidConfigError, MissingArtifactsError
from corbf.tasks import plant_response
from corbf.trainer import TrainTrace, read_trace_csv, write_trace_csv


@pytest.fixture(scope="module")
def tiny_funapprox(tmp_path_factory):
    out = tmp_path_factory.mktemp("tiny_funapprox")
    cfg = ExperimentConfig(task="funapprox", runs=2, epochs=3, out_dir=str(out))
    assert run_experiment(cfg) == 0
    return out


@pytest.fixture(scope="module")
def tiny_iris(tmp_path_factory):
    out = tmp_path_factory.mktemp("tiny_iris")
    cfg = ExperimentConfig(task="iris", runs=1, epochs=5, out_dir=str(out))
    assert run_experiment(cfg) == 0
    return out


class TestExperimentConfig:
    def test_defaults_match_published_settings(self):
        assert TASK_DEFAULTS["iris"]["eta"] == 5e-3
        assert TASK_DEFAULTS["iris"]["epochs"] == 2000
        assert TASK_DEFAULTS["iris"]["sigma"] == 1.0
        assert TASK_DEFAULTS["funapprox"]["eta"] == 1e-3
        assert TASK_DEFAULTS["sysid"]["eta"] == 1e-4
        assert IRIS_INFLUENCE == 0.2
        assert TASKS == ("iris", "funapprox", "sysid")
        assert ARCHITECTURES == ("manual", "adaptive", "co")

    def test_resolved_fills_task_defaults(self):
        cfg = ExperimentConfig(task="iris").resolved()
        assert cfg.epochs == 2000 and cfg.eta == 5e-3
        assert cfg.sigma == 1.0 and cfg.shuffle is True
        explicit = ExperimentConfig(task="iris", epochs=7, eta=0.1).resolved()
        assert explicit.epochs == 7 and explicit.eta == 0.1

    def test_validation(self):
        bad = [dict(task="nope"),
               dict(architectures=()),
               dict(architectures=("co", "co")),
               dict(architectures=("bogus",)),
               dict(runs=0),
               dict(jobs=0),
               dict(epochs=0),
               dict(eta=0.0),
               dict(eta=-1.0),
               dict(sigma=0.0),
               dict(init="nope"),
               dict(funapprox_target="nope"),
               dict(sysid_centers="nope")]
        for overrides in bad:
            kwargs = dict(task="iris")
            kwargs.update(overrides)
            with pytest.raises(InvalidConfigError):
                ExperimentConfig(**kwargs)

    def test_unwritable_out_dir(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        cfg = ExperimentConfig(task="funapprox", runs=1, epochs=1,
                               out_dir=str(blocker / "sub"))
        with pytest.raises(InvalidConfigError):
            run_experiment(cfg)


class TestFunapproxArtifacts:
    def test_all_expected_artifacts_exist(self, tiny_funapprox):
        for name in expected_artifacts("funapprox", ARCHITECTURES, 2):
            assert (tiny_funapprox / name).is_file(), name
        for arch in ARCHITECTURES:
            for r in range(2):
                assert (tiny_funapprox / curve_name("funapprox", arch, r)).is_file()

    def test_manifest_contents(self, tiny_funapprox):
        with open(tiny_funapprox / MANIFEST_NAME, encoding="utf-8") as fh:
            man = json.load(fh)
        assert man["format"] == "corbf-manifest/1"
        assert man["version"] == corbf.__version__
        assert man["task"] == "funapprox"
        assert man["runs"] == 2 and man["epochs"] == 3
        assert man["run_seeds"] == [0, 1]
        assert man["divergence_count"] == 0
        assert man["artifacts"] == sorted(man["artifacts"])
        for name in expected_artifacts("funapprox", ARCHITECTURES, 2):
            assert name in man["artifacts"]

    def test_curve_rows_match_epochs(self, tiny_funapprox):
        for arch in ARCHITECTURES:
            per_run = read_trace_csv(tiny_funapprox / curve_name("funapprox", arch, 0))
            mean = read_trace_csv(tiny_funapprox / mean_curve_name("funapprox", arch))
            assert per_run["epoch"].shape == (3,)
            assert mean["epoch"].shape == (3,)
            assert per_run["train_acc"] is None  # regression task

    def test_mean_curve_recomputes_from_run_curves(self, tiny_funapprox):
        # fixture oracle: the emitted mean curve must equal an epoch-wise mean
        # of the emitted per-run curves (CSV floats round-trip losslessly)
        for arch in ARCHITECTURES:
            runs = [read_trace_csv(tiny_funapprox / curve_name("funapprox", arch, r))
                    for r in range(2)]
            mean = read_trace_csv(tiny_funapprox / mean_curve_name("funapprox", arch))
            np.testing.assert_array_equal(
                mean["mse_db"], np.stack([t["mse_db"] for t in runs]).mean(axis=0))
            np.testing.assert_array_equal(
                mean["mse_linear"],
                np.stack([t["mse_linear"] for t in runs]).mean(axis=0))

    def test_surface_csvs_parse(self, tiny_funapprox):
        train = read_surface_csv(tiny_funapprox / "funapprox_co_train_surface.csv")
        test = read_surface_csv(tiny_funapprox / "funapprox_co_test_surface.csv")
        assert train["error"].shape == (121,)
        assert test["error"].shape == (100,)
        assert train["x1"].min() == -1.0 and train["x1"].max() == 1.0
        assert test["x1"].min() == -0.9 and test["x1"].max() == 0.9

    def test_test_errors_csv_parses(self, tiny_funapprox):
        errs = read_test_errors_csv(tiny_funapprox / "funapprox_co_test_errors.csv")
        assert sorted(errs) == [0, 1]
        assert errs[0].shape == (100,)

    def test_report_runs_without_reference_rows_missing(self, tiny_funapprox):
        text = compare_report(tiny_funapprox)
        assert "funapprox final train MSE dB (co)" in text
        assert "ordering check" in text
        assert text.endswith("diverged runs: 0\n")


class TestIrisArtifacts:
    def test_metric_tables_exist_and_parse(self, tiny_iris):
        for name in ("accuracy", "sensitivity", "specificity", "youden"):
            path = tiny_iris / f"iris_{name}.csv"
            lines = path.read_text(encoding="utf-8").splitlines()
            assert lines[0] == "architecture,phase,class,mean,std"
            assert len(lines) > 1
        acc_lines = (tiny_iris / "iris_accuracy.csv").read_text(
            encoding="utf-8").splitlines()[1:]
        seen = {tuple(l.split(",")[:3]) for l in acc_lines}
        for arch in ARCHITECTURES:
            assert (arch, "training", "all") in seen
            assert (arch, "testing", "all") in seen
        for line in acc_lines:
            mean_cell = line.split(",")[3]
            if mean_cell != "NA":
                assert 0.0 <= float(mean_cell) <= 100.0

    def test_report_contains_reference_accuracy_cells(self, tiny_iris):
        text = compare_report(tiny_iris)
        assert "98.35 ± 0.12" in text
        assert "99.13 ± 1.47" in text
        assert "citations:" in text

    def test_curves_record_accuracies(self, tiny_iris):
        trace = read_trace_csv(tiny_iris / curve_name("iris", "co", 0))
        assert trace["train_acc"] is not None and trace["test_acc"] is not None
        assert trace["train_acc"].shape == (5,)
        assert np.all((trace["test_acc"] >= 0.0) & (trace["test_acc"] <= 1.0))


class TestSysidArtifacts:
    @pytest.fixture()
    def tiny_sysid(self, tmp_path):
        cfg = ExperimentConfig(task="sysid", runs=1, epochs=3, out_dir=str(tmp_path))
        assert run_experiment(cfg) == 0
        return tmp_path

    def test_trace_pairs_use_clean_plant_output(self, tiny_sysid):
        lines = (tiny_sysid / "sysid_co_trace.csv").read_text(
            encoding="utf-8").splitlines()
        assert lines[0] == "t,input,actual,predicted"
        assert len(lines) == 1 + 400
        cols = np.array([[float(v) for v in l.split(",")] for l in lines[1:]])
        np.testing.assert_array_equal(cols[:, 0], np.arange(400))
        np.testing.assert_array_equal(cols[:, 2], plant_response(cols[:, 1]))

    def test_report_on_synthetic_curves(self, tiny_sysid):
        # fixture oracle: hand-crafted mean curves with known dB values must
        # surface verbatim in the report's measured column and checks
        crafted = {"co": [-1.0, -5.8, -6.0],
                   "adaptive": [-1.0, -3.0, -5.6],
                   "manual": [-1.0, -2.0, -5.1]}
        for arch, db in crafted.items():
            db = np.array(db)
            trace = TrainTrace(epochs=np.arange(1, 4), mse_linear=10.0 ** (db / 10.0),
                               mse_db=db, train_acc=None, test_acc=None,
                               final_model=None)
            write_trace_csv(trace, tiny_sysid / mean_curve_name("sysid", arch))
        text = compare_report(tiny_sysid)
        measured = {}
        for line in text.splitlines():
            if line.startswith("sysid "):
                # fixed-width columns: label 44 chars, measured 18, reported 18
                measured[line[:44].strip()] = line[45:63].strip()
        assert measured["sysid final train MSE dB (co)"] == "-6.00"
        assert measured["sysid final train MSE dB (manual)"] == "-5.10"
        # -6.0 + 0.5 = -5.5 is first reached at epoch 2
        assert measured["sysid epochs to final+0.5 dB (co)"] == "2"
        assert measured["sysid epochs to final+0.5 dB (manual)"] == "3"
        assert "convergence-speed check (co fastest to final+0.5 dB): PASS" in text
        # spread = -5.1 - (-6.0)
        assert "final-MSE agreement check (spread <= 1 dB): PASS (spread 0.900 dB)" in text

    def test_battery_ordering_recomputed_from_csvs(self, sysid_battery):
        finals = {}
        reach = {}
        for arch in ARCHITECTURES:
            db = np.asarray(sysid_battery.mean_db[arch])
            finals[arch] = float(db[-1])
            reach[arch] = int(np.nonzero(db <= finals[arch] + 0.5)[0][0]) + 1
        assert max(finals.values()) - min(finals.values()) <= 1.0
        assert reach["co"] < reach["manual"]
        assert reach["co"] < reach["adaptive"]


class TestCompareReportErrors:
    def test_empty_directory(self, tmp_path):
        with pytest.raises(MissingArtifactsError) as exc:
            compare_report(tmp_path)
        assert exc.value.missing == [MANIFEST_NAME]

    def test_missing_artifact_listed(self, tiny_funapprox, tmp_path):
        clone = tmp_path / "clone"
        shutil.copytree(tiny_funapprox, clone)
        victim = "funapprox_adaptive_test_errors.csv"
        os.remove(clone / victim)
        with pytest.raises(MissingArtifactsError) as exc:
            compare_report(clone)
        assert exc.value.missing == [victim]


class TestDeterminism:
    def test_jobs_do_not_change_artifacts(self, tiny_funapprox, tmp_path):
        cfg = ExperimentConfig(task="funapprox", runs=2, epochs=3,
                               out_dir=str(tmp_path), jobs=2)
        assert run_experiment(cfg) == 0
        for name in os.listdir(tiny_funapprox):
            if name == MANIFEST_NAME:
                a = json.loads((tiny_funapprox / name).read_text(encoding="utf-8"))
                b = json.loads((tmp_path / name).read_text(encoding="utf-8"))
                for drop in ("wall_clock_sec", "jobs"):
                    a.pop(drop), b.pop(drop)
                assert a == b
            else:
                assert (tiny_funapprox / name).read_bytes() == \
                    (tmp_path / name).read_bytes(), name

    def test_manifest_round_trip_reproduces_curves(self, tiny_funapprox, tmp_path):
        cfg = config_from_manifest(tiny_funapprox / MANIFEST_NAME)
        rerun = dataclasses.replace(cfg, out_dir=str(tmp_path))
        assert run_experiment(rerun) == 0
        for name in os.listdir(tiny_funapprox):
            if name != MANIFEST_NAME:
                assert (tiny_funapprox / name).read_bytes() == \
                    (tmp_path / name).read_bytes(), name


class TestBoundProbe:
    def test_sysid_default_respects_bound(self):
        probe = bound_probe("sysid")
        assert probe["task"] == "sysid"
        assert probe["eta"] == 1e-4
        assert probe["bound"] > probe["eta"]
        assert probe["respects"] is True

    def test_eta_override_can_violate(self):
        probe = bound_probe("sysid", eta=5.0)
        assert probe["respects"] is False

    def test_unknown_task(self):
        with pytest.raises(InvalidConfigError):
            bound_probe("nope")
        with pytest.raises(InvalidConfigError):
            bound_probe("sysid", sysid_centers="nope")


class TestCli:
    def test_run_writes_curve_with_epoch_rows(self, tmp_path, capsys):
        out = tmp_path / "r"
        rc = cli.main(["run", "iris", "--arch", "co", "--runs", "1",
                       "--epochs", "10", "--out", str(out)])
        assert rc == 0
        assert "wrote artifacts to" in capsys.readouterr().out
        lines = (out / curve_name("iris", "co", 0)).read_text(
            encoding="utf-8").splitlines()
        assert len(lines) == 1 + 10

    def test_report_command(self, tiny_iris, capsys):
        rc = cli.main(["report", str(tiny_iris)])
        assert rc == 0
        assert "98.35" in capsys.readouterr().out

    def test_bound_command(self, capsys):
        rc = cli.main(["bound", "sysid"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "learning-rate bound" in out
        assert "respects the bound" in out

    def test_invalid_config_exits_2(self, capsys):
        rc = cli.main(["run", "iris", "--runs", "0"])
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_report_on_empty_dir_exits_2(self, tmp_path, capsys):
        rc = cli.main(["report", str(tmp_path)])
        assert rc == 2
        assert "is missing: manifest.json" in capsys.readouterr().err

    def test_all_diverged_exits_1(self, tmp_path, capsys):
        rc = cli.main(["run", "funapprox", "--arch", "co", "--runs", "1",
                       "--epochs", "2", "--eta", "10", "--out", str(tmp_path)])
        assert rc == 1
        assert "diverged" in capsys.readouterr().err
        with open(tmp_path / MANIFEST_NAME, encoding="utf-8") as fh:
            man = json.load(fh)
        assert man["divergence_count"] == 1
        assert man["divergences"]["co"][0]["epoch"] >= 1

    def test_custom_target_alias(self, tmp_path):
        rc = cli.main(["run", "funapprox", "--arch", "co", "--runs", "1",
                       "--epochs", "2", "--funapprox-target", "custom",
                       "--out", str(tmp_path)])
        assert rc == 0
        with open(tmp_path / MANIFEST_NAME, encoding="utf-8") as fh:
            assert json.load(fh)["funapprox_target"] == "constant-one"
