"""Shared fixtures: the expensive 20-run benchmark batteries.

The three battery fixtures each run a full experiment through the public
bench harness and hand tests the artifact directory plus parsed curves, so
the acceptance criteria are evaluated from the same CSV files a user would
get from the CLI. Session scope: each battery runs once per pytest session,
and only when some test actually requests it.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from corbf.bench import (ExperimentConfig, curve_name, mean_curve_name,
                         run_experiment)
from corbf.trainer import read_trace_csv

BATTERY_RUNS = 20
BATTERY_SEED = 0


@dataclass
class Battery:
    """Parsed view of one experiment directory."""

    directory: Path
    task: str
    runs: int
    mean_db: dict          # arch -> per-epoch mean of per-run dB curves
    final_db: dict         # arch -> last entry of mean_db
    final_test_acc: dict   # arch -> per-run final test accuracy (iris only)


def _load_battery(directory: Path, task: str, archs=("manual", "adaptive", "co"),
                  runs: int = BATTERY_RUNS) -> Battery:
    mean_db = {}
    final_test_acc = {}
    for arch in archs:
        curve = read_trace_csv(directory / mean_curve_name(task, arch))
        mean_db[arch] = np.asarray(curve["mse_db"], dtype=np.float64)
        if task == "iris":
            accs = []
            for run in range(runs):
                per_run = read_trace_csv(directory / curve_name(task, arch, run))
                accs.append(float(per_run["test_acc"][-1]))
            final_test_acc[arch] = accs
    final_db = {arch: float(db[-1]) for arch, db in mean_db.items()}
    return Battery(directory, task, runs, mean_db, final_db, final_test_acc)


def _run_battery(tmp_path_factory, task: str) -> Battery:
    out = tmp_path_factory.mktemp(f"{task}_battery")
    status = run_experiment(ExperimentConfig(
        task=task, runs=BATTERY_RUNS, seed=BATTERY_SEED, out_dir=str(out)))
    assert status == 0, f"{task} battery reported divergence-only status {status}"
    return _load_battery(out, task)


@pytest.fixture(scope="session")
def iris_battery(tmp_path_factory) -> Battery:
    return _run_battery(tmp_path_factory, "iris")


@pytest.fixture(scope="session")
def funapprox_battery(tmp_path_factory) -> Battery:
    return _run_battery(tmp_path_factory, "funapprox")


@pytest.fixture(scope="session")
def sysid_battery(tmp_path_factory) -> Battery:
    return _run_battery(tmp_path_factory, "sysid")
