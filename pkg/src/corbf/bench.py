"""Benchmark harness: run the three tasks across architectures and seeds.

An experiment = one task x a set of architectures x `runs` seeded repetitions.
Artifacts per architecture: per-run learning-curve CSVs, a mean curve CSV,
task-specific outputs (iris metric tables, function-approximation error
surfaces and test-error listings, system-identification predicted-vs-actual
traces), plus one JSON manifest describing the whole experiment. Re-running
with the config recorded in a manifest reproduces the curve files byte for
byte: every random stream derives from seed + run_index and aggregation order
is fixed by run index, never by completion order.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .centers import SubtractiveConfig, fixed_centers, subtractive_clustering
from .errors import InvalidConfigError, DivergenceError, MissingArtifactsError, DataFormatError
from .kernels import CosineParams, GaussianParams, KernelBank, kernel_matrix
from .metrics import (accuracy, confusion, error_surface, format_percent,
                      format_youden, sensitivity_specificity_youden,
                      write_metric_table)
from .model import (AdaptiveFusion, CoFusion, FixedFusion, MultiHeadRbfModel,
                    RbfModel, forward_batch)
from .tasks import (DEFAULT_FUNAPPROX_TARGET, FUNAPPROX_TARGETS, funapprox_target,
                    gen_function_approx, gen_sysid, load_iris)
from .trainer import (INIT_KINDS, TrainConfig, TrainTrace, fit,
                      learning_rate_bound, write_trace_csv, read_trace_csv)

TASKS = ("iris", "funapprox", "sysid")
ARCHITECTURES = ("manual", "adaptive", "co")
MANIFEST_NAME = "manifest.json"
MANIFEST_FORMAT = "corbf-manifest/1"

# Per-task training defaults: learning rate, epoch budget, Gaussian width, and
# presentation order. The iris task shuffles because its file order is
# class-blocked, a degenerate ordering for per-sample updates; the two
# regression tasks keep their natural sample order.
TASK_DEFAULTS = {
    "iris": {"eta": 5e-3, "epochs": 2000, "sigma": 1.0, "shuffle": True},
    "funapprox": {"eta": 1e-3, "epochs": 2000, "sigma": 1.0, "shuffle": False},
    "sysid": {"eta": 1e-4, "epochs": 1000, "sigma": 0.5, "shuffle": False},
}

# Iris center selection: subtractive clustering, influence radius 0.2 over the
# training split, squash radius 1.25x the influence radius, capped at 16
# centers (the classic subclust parameterization; yields exactly 16 here).
IRIS_INFLUENCE = 0.2
IRIS_SQUASH = 0.25
IRIS_MAX_CENTERS = 16

# "repeated-endpoint" preserves the duplicated -100 endpoint that some task
# statements print in place of +100.
SYSID_CENTER_SETS = {
    "symmetric": (-100.0, -50.0, 0.0, 50.0, 100.0),
    "repeated-endpoint": (-100.0, -50.0, 0.0, 50.0, -100.0),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved or partial settings for one benchmark experiment.

    Fields left at None fall back to TASK_DEFAULTS for the chosen task via
    resolved(). seed is the root seed; run r uses seed + r for both its data
    split/noise and its weight init.
    """

    task: str
    architectures: tuple[str, ...] = ARCHITECTURES
    runs: int = 20
    seed: int = 0
    out_dir: str = "corbf-results"
    epochs: int | None = None
    eta: float | None = None
    sigma: float | None = None
    shuffle: bool | None = None
    init: str = "uniform"
    init_scale: float = 0.1
    alpha_eta: float | None = None
    jobs: int = 1
    funapprox_target: str = DEFAULT_FUNAPPROX_TARGET
    sysid_centers: str = "symmetric"

    def __post_init__(self):
        if self.task not in TASKS:
            raise InvalidConfigError(f"unknown task {self.task!r}; expected one of {TASKS}")
        archs = tuple(self.architectures)
        if not archs:
            raise InvalidConfigError("at least one architecture is required")
        for a in archs:
            if a not in ARCHITECTURES:
                raise InvalidConfigError(
                    f"unknown architecture {a!r}; expected a subset of {ARCHITECTURES}")
        if len(set(archs)) != len(archs):
            raise InvalidConfigError(f"duplicate architecture in {archs}")
        object.__setattr__(self, "architectures", archs)
        if self.runs < 1:
            raise InvalidConfigError(f"runs must be >= 1, got {self.runs}")
        if self.jobs < 1:
            raise InvalidConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.epochs is not None and self.epochs < 1:
            raise InvalidConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.eta is not None and not self.eta > 0.0:
            raise InvalidConfigError(f"eta must be > 0, got {self.eta}")
        if self.sigma is not None and not self.sigma > 0.0:
            raise InvalidConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.init not in INIT_KINDS:
            raise InvalidConfigError(f"unknown init {self.init!r}; expected one of {INIT_KINDS}")
        if self.funapprox_target not in FUNAPPROX_TARGETS:
            raise InvalidConfigError(
                f"unknown funapprox target {self.funapprox_target!r}; "
                f"expected one of {FUNAPPROX_TARGETS}")
        if self.sysid_centers not in SYSID_CENTER_SETS:
            raise InvalidConfigError(
                f"unknown sysid center set {self.sysid_centers!r}; "
                f"expected one of {tuple(SYSID_CENTER_SETS)}")

    def resolved(self) -> "ExperimentConfig":
        """A copy with every None training field filled from TASK_DEFAULTS."""
        d = TASK_DEFAULTS[self.task]
        fields = dict(asdict(self), architectures=self.architectures)
        for key in ("epochs", "eta", "sigma", "shuffle"):
            if fields[key] is None:
                fields[key] = d[key]
        return ExperimentConfig(**fields)


def _iris_bank(X_train: np.ndarray, sigma: float) -> KernelBank:
    centers = subtractive_clustering(
        X_train,
        SubtractiveConfig(IRIS_INFLUENCE, squash_radius=IRIS_SQUASH,
                          max_centers=IRIS_MAX_CENTERS))
    return KernelBank(centers, GaussianParams(sigma), CosineParams())


def _single_head(bank: KernelBank, arch: str) -> RbfModel:
    K, L = bank.n_centers, bank.n_kernels
    if arch == "manual":
        return RbfModel(bank, FixedFusion(0.5, 0.5), np.zeros(K))
    if arch == "adaptive":
        return RbfModel(bank, AdaptiveFusion(0.5, 0.5), np.zeros(K))
    return RbfModel(bank, CoFusion(), np.zeros((K, L)))


def _multi_head(bank: KernelBank, arch: str, labels: tuple) -> MultiHeadRbfModel:
    heads = tuple(_single_head(bank, arch) for _ in labels)
    return MultiHeadRbfModel(heads, tuple(labels))


def _train_config(params: dict, run_seed: int) -> TrainConfig:
    return TrainConfig(eta=params["eta"], epochs=params["epochs"], seed=run_seed,
                       shuffle=params["shuffle"], init=params["init"],
                       init_scale=params["init_scale"], alpha_eta=params["alpha_eta"])


def _phase_metrics(model: MultiHeadRbfModel, X: np.ndarray, y: np.ndarray,
                   labels: tuple) -> dict:
    pred = model.decide_batch(X)
    cc = confusion(pred, y, len(labels))
    ssy = sensitivity_specificity_youden(cc)
    return {
        "accuracy": accuracy(pred, y),
        "per_class": [
            {"label": str(labels[i]), "sensitivity": ssy[i][0],
             "specificity": ssy[i][1], "youden": ssy[i][2]}
            for i in range(len(labels))
        ],
    }


def _run_single(task: str, arch: str, run_seed: int, params: dict,
                want_extras: bool) -> dict:
    """One seeded training run; returns plain lists/floats so it can cross
    process boundaries. want_extras adds the per-run model-dependent artifacts
    (surfaces, predicted-vs-actual) emitted only for the first run."""
    out: dict = {"arch": arch, "seed": run_seed}
    try:
        if task == "iris":
            train, test = load_iris(seed=run_seed)
            bank = _iris_bank(train.X, params["sigma"])
            model = _multi_head(bank, arch, train.class_labels)
            trace = fit(model, train.X, train.y, _train_config(params, run_seed),
                        eval_set=(test.X, test.y))
            final = trace.final_model
            out["metrics"] = {
                "training": _phase_metrics(final, train.X, train.y, train.class_labels),
                "testing": _phase_metrics(final, test.X, test.y, train.class_labels),
            }
        elif task == "funapprox":
            truth = funapprox_target(params["funapprox_target"])
            train, test = gen_function_approx(truth)
            bank = KernelBank(train.X.copy(), GaussianParams(params["sigma"]),
                              CosineParams())
            model = _single_head(bank, arch)
            trace = fit(model, train.X, train.y, _train_config(params, run_seed))
            final = trace.final_model
            test_err = test.y - forward_batch(final, test.X)
            out["test_errors"] = [float(v) for v in test_err]
            if want_extras:
                surf_tr = error_surface(final, [(-1.0, 1.0), (-1.0, 1.0)], 0.2, truth)
                surf_te = error_surface(final, [(-0.9, 0.9), (-0.9, 0.9)], 0.2, truth)
                out["surfaces"] = {
                    "train": _surface_payload(surf_tr),
                    "test": _surface_payload(surf_te),
                }
        else:
            signal = gen_sysid(seed=run_seed)
            X = signal.u.reshape(1, -1)
            centers = fixed_centers(
                np.array([[c] for c in SYSID_CENTER_SETS[params["sysid_centers"]]]))
            bank = KernelBank(centers, GaussianParams(params["sigma"]), CosineParams())
            model = _single_head(bank, arch)
            trace = fit(model, X, signal.y_noisy, _train_config(params, run_seed))
            final = trace.final_model
            if want_extras:
                predicted = forward_batch(final, X)
                out["trace_pairs"] = {
                    "input": [float(v) for v in signal.u],
                    "actual": [float(v) for v in signal.y_clean],
                    "predicted": [float(v) for v in predicted],
                }
    except DivergenceError as exc:
        out["diverged"] = {"epoch": exc.epoch, "sample": exc.sample,
                           "error_value": float(exc.error_value)}
        return out
    out["mse_linear"] = [float(v) for v in trace.mse_linear]
    out["mse_db"] = [float(v) for v in trace.mse_db]
    out["train_acc"] = (None if trace.train_acc is None
                        else [float(v) for v in trace.train_acc])
    out["test_acc"] = (None if trace.test_acc is None
                       else [float(v) for v in trace.test_acc])
    return out


def _surface_payload(surf) -> dict:
    return {
        "axis1": [float(v) for v in surf.axis1],
        "axis2": [float(v) for v in surf.axis2],
        "errors": [[float(v) for v in row] for row in surf.errors],
    }


def _worker(args: tuple) -> dict:
    return _run_single(*args)


def curve_name(task: str, arch: str, run_index: int) -> str:
    return f"{task}_{arch}_run{run_index:02d}_curve.csv"


def mean_curve_name(task: str, arch: str) -> str:
    return f"{task}_{arch}_mean_curve.csv"


def expected_artifacts(task: str, architectures: tuple[str, ...], runs: int) -> list[str]:
    """Artifact file names run_experiment promises for this configuration.

    Per-run curves exist only for completed (non-diverged) runs, so they are
    not listed here; the manifest enumerates the ones actually written.
    """
    names = [MANIFEST_NAME]
    for arch in architectures:
        names.append(mean_curve_name(task, arch))
    if task == "iris":
        names += ["iris_accuracy.csv", "iris_sensitivity.csv",
                  "iris_specificity.csv", "iris_youden.csv"]
    elif task == "funapprox":
        for arch in architectures:
            names += [f"funapprox_{arch}_train_surface.csv",
                      f"funapprox_{arch}_test_surface.csv",
                      f"funapprox_{arch}_test_errors.csv"]
    else:
        for arch in architectures:
            names.append(f"sysid_{arch}_trace.csv")
    return names


def _write_surface_csv(path: str, payload: dict) -> None:
    axis1, axis2 = payload["axis1"], payload["axis2"]
    errors = payload["errors"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x1,x2,error\n")
        for i, a in enumerate(axis1):
            for j, b in enumerate(axis2):
                fh.write(f"{repr(float(a))},{repr(float(b))},{repr(float(errors[i][j]))}\n")


def read_surface_csv(path: str) -> dict:
    """Parse an error-surface CSV back into axis/error arrays."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "x1,x2,error":
            raise DataFormatError("unexpected surface header", path=str(path), line=1)
        rows = [line.strip().split(",") for line in fh if line.strip()]
    x1 = np.array([float(r[0]) for r in rows])
    x2 = np.array([float(r[1]) for r in rows])
    err = np.array([float(r[2]) for r in rows])
    return {"x1": x1, "x2": x2, "error": err}


def _write_test_errors_csv(path: str, per_run: dict[int, list[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("run,index,error\n")
        for run_index in sorted(per_run):
            for i, v in enumerate(per_run[run_index]):
                fh.write(f"{run_index},{i},{repr(float(v))}\n")


def read_test_errors_csv(path: str) -> dict[int, np.ndarray]:
    """Parse a per-run test-error CSV into {run_index: errors}."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "run,index,error":
            raise DataFormatError("unexpected test-error header", path=str(path), line=1)
        acc: dict[int, list[float]] = {}
        for line in fh:
            if not line.strip():
                continue
            run_s, _idx, err_s = line.strip().split(",")
            acc.setdefault(int(run_s), []).append(float(err_s))
    return {k: np.array(v) for k, v in acc.items()}


def _write_sysid_trace_csv(path: str, pairs: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,input,actual,predicted\n")
        for t, (u, a, p) in enumerate(zip(pairs["input"], pairs["actual"],
                                          pairs["predicted"])):
            fh.write(f"{t},{repr(float(u))},{repr(float(a))},{repr(float(p))}\n")


def _trace_from_result(res: dict) -> TrainTrace:
    n = len(res["mse_linear"])
    return TrainTrace(
        epochs=np.arange(1, n + 1),
        mse_linear=np.array(res["mse_linear"]),
        mse_db=np.array(res["mse_db"]),
        train_acc=None if res["train_acc"] is None else np.array(res["train_acc"]),
        test_acc=None if res["test_acc"] is None else np.array(res["test_acc"]),
        final_model=None,
    )


def _mean_curve_trace(results: list[dict]) -> TrainTrace:
    """Average completed runs epoch-wise. mse_linear is the mean linear MSE;
    mse_db is the mean of per-run dB curves (the convention used for reported
    curve comparisons); accuracies are plain means."""
    lin = np.stack([r["mse_linear"] for r in results])
    db = np.stack([r["mse_db"] for r in results])
    n = lin.shape[1]

    def _acc(key):
        if results[0][key] is None:
            return None
        return np.stack([r[key] for r in results]).mean(axis=0)

    return TrainTrace(
        epochs=np.arange(1, n + 1),
        mse_linear=lin.mean(axis=0),
        mse_db=db.mean(axis=0),
        train_acc=_acc("train_acc"),
        test_acc=_acc("test_acc"),
        final_model=None,
    )


def _mean_std(values: list[float]) -> tuple[float, float]:
    arr = np.array(values, dtype=np.float64)
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1))


def _iris_metric_rows(per_arch: dict[str, list[dict]]) -> dict[str, list[tuple]]:
    """Build (architecture, phase, class, mean, std) rows for the four tables."""
    tables: dict[str, list[tuple]] = {
        "accuracy": [], "sensitivity": [], "specificity": [], "youden": []}
    for arch, results in per_arch.items():
        for phase in ("training", "testing"):
            accs = [r["metrics"][phase]["accuracy"] for r in results]
            tables["accuracy"].append((arch, phase, "all", *_mean_std(accs)))
            labels = [c["label"] for c in results[0]["metrics"][phase]["per_class"]]
            for ci, label in enumerate(labels):
                for key in ("sensitivity", "specificity", "youden"):
                    vals = [r["metrics"][phase]["per_class"][ci][key] for r in results]
                    known = [v for v in vals if v is not None]
                    if known:
                        mean, std = _mean_std(known)
                    else:
                        mean, std = None, None
                    tables[key].append((arch, phase, label, mean, std))
    return tables


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run the experiment, write artifacts into cfg.out_dir, return exit status.

    0 = success (possibly with some diverged runs, noted in the manifest);
    1 = every run of every architecture diverged. Invalid configurations raise
    InvalidConfigError (the CLI maps that to exit status 2).
    """
    cfg = cfg.resolved()
    t0 = time.monotonic()
    try:
        os.makedirs(cfg.out_dir, exist_ok=True)
        probe = os.path.join(cfg.out_dir, ".writable")
        with open(probe, "w", encoding="utf-8") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise InvalidConfigError(f"output directory {cfg.out_dir!r} is not writable: {exc}")

    params = {"eta": cfg.eta, "epochs": cfg.epochs, "sigma": cfg.sigma,
              "shuffle": cfg.shuffle, "init": cfg.init, "init_scale": cfg.init_scale,
              "alpha_eta": cfg.alpha_eta, "funapprox_target": cfg.funapprox_target,
              "sysid_centers": cfg.sysid_centers}
    jobs_list = [(cfg.task, arch, cfg.seed + run, params, run == 0)
                 for arch in cfg.architectures for run in range(cfg.runs)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            flat = list(pool.map(_worker, jobs_list))
    else:
        flat = [_worker(args) for args in jobs_list]

    completed: dict[str, list[tuple[int, dict]]] = {a: [] for a in cfg.architectures}
    divergences: dict[str, list[dict]] = {a: [] for a in cfg.architectures}
    pos = 0
    for arch in cfg.architectures:
        for run in range(cfg.runs):
            res = flat[pos]
            pos += 1
            if "diverged" in res:
                divergences[arch].append({"run": run, **res["diverged"]})
            else:
                completed[arch].append((run, res))

    written: list[str] = [MANIFEST_NAME]

    def _emit(name: str, writer) -> None:
        writer(os.path.join(cfg.out_dir, name))
        written.append(name)

    for arch in cfg.architectures:
        for run, res in completed[arch]:
            _emit(curve_name(cfg.task, arch, run),
                  lambda p, r=res: write_trace_csv(_trace_from_result(r), p))
        if completed[arch]:
            results = [r for _, r in completed[arch]]
            _emit(mean_curve_name(cfg.task, arch),
                  lambda p, rs=results: write_trace_csv(_mean_curve_trace(rs), p))

    if cfg.task == "iris":
        per_arch = {a: [r for _, r in completed[a]] for a in cfg.architectures
                    if completed[a]}
        if per_arch:
            tables = _iris_metric_rows(per_arch)
            for key, formatter in (("accuracy", format_percent),
                                   ("sensitivity", format_percent),
                                   ("specificity", format_percent),
                                   ("youden", format_youden)):
                _emit(f"iris_{key}.csv",
                      lambda p, rows=tables[key], f=formatter: write_metric_table(p, rows, f))
    elif cfg.task == "funapprox":
        for arch in cfg.architectures:
            if not completed[arch]:
                continue
            first = completed[arch][0][1]
            if "surfaces" in first:
                _emit(f"funapprox_{arch}_train_surface.csv",
                      lambda p, s=first["surfaces"]["train"]: _write_surface_csv(p, s))
                _emit(f"funapprox_{arch}_test_surface.csv",
                      lambda p, s=first["surfaces"]["test"]: _write_surface_csv(p, s))
            errs = {run: r["test_errors"] for run, r in completed[arch]}
            _emit(f"funapprox_{arch}_test_errors.csv",
                  lambda p, e=errs: _write_test_errors_csv(p, e))
    else:
        for arch in cfg.architectures:
            if not completed[arch]:
                continue
            first = completed[arch][0][1]
            if "trace_pairs" in first:
                _emit(f"sysid_{arch}_trace.csv",
                      lambda p, t=first["trace_pairs"]: _write_sysid_trace_csv(p, t))

    from . import __version__
    manifest = {
        "format": MANIFEST_FORMAT,
        "version": __version__,
        "task": cfg.task,
        "architectures": list(cfg.architectures),
        "runs": cfg.runs,
        "seed": cfg.seed,
        "run_seeds": [cfg.seed + r for r in range(cfg.runs)],
        "epochs": cfg.epochs,
        "eta": cfg.eta,
        "sigma": cfg.sigma,
        "shuffle": cfg.shuffle,
        "init": cfg.init,
        "init_scale": cfg.init_scale,
        "alpha_eta": cfg.alpha_eta,
        "jobs": cfg.jobs,
        "funapprox_target": cfg.funapprox_target,
        "sysid_centers": cfg.sysid_centers,
        "divergences": divergences,
        "divergence_count": sum(len(v) for v in divergences.values()),
        "artifacts": sorted(written),
        "wall_clock_sec": round(time.monotonic() - t0, 3),
    }
    with open(os.path.join(cfg.out_dir, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")

    all_diverged = all(not completed[a] for a in cfg.architectures)
    return 1 if all_diverged else 0


def config_from_manifest(path: str | os.PathLike) -> ExperimentConfig:
    """Rebuild the ExperimentConfig recorded in a manifest (out_dir is the
    manifest's directory; rerunning it reproduces identical curve files)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            m = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"manifest is not valid JSON: {exc}", path=str(path))
    if m.get("format") != MANIFEST_FORMAT:
        raise DataFormatError(
            f"unexpected manifest format {m.get('format')!r}", path=str(path))
    return ExperimentConfig(
        task=m["task"], architectures=tuple(m["architectures"]), runs=m["runs"],
        seed=m["seed"], out_dir=os.path.dirname(os.path.abspath(path)) or ".",
        epochs=m["epochs"], eta=m["eta"], sigma=m["sigma"], shuffle=m["shuffle"],
        init=m["init"], init_scale=m["init_scale"], alpha_eta=m["alpha_eta"],
        jobs=m["jobs"], funapprox_target=m["funapprox_target"],
        sysid_centers=m["sysid_centers"])


def _read_metric_table(path: str) -> list[dict]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "architecture,phase,class,mean,std":
            raise DataFormatError("unexpected metric-table header", path=str(path), line=1)
        for line in fh:
            if not line.strip():
                continue
            arch, phase, cls, mean, std = line.strip().split(",")
            rows.append({"architecture": arch, "phase": phase, "class": cls,
                         "mean": None if mean == "NA" else float(mean),
                         "std": None if std == "NA" else float(std)})
    return rows


def _epochs_to_level(db_curve: np.ndarray, level_db: float) -> int | None:
    """First 1-based epoch at which the curve is at or below level_db."""
    hits = np.nonzero(db_curve <= level_db)[0]
    return None if hits.size == 0 else int(hits[0]) + 1


def _fmt(v: float | None, nd: int = 2) -> str:
    return "NA" if v is None else f"{v:.{nd}f}"


def compare_report(results_dir: str | os.PathLike) -> str:
    """Summarize an experiment directory against the published reference
    figures and the acceptance checks that can be evaluated from artifacts.
    Reads artifacts only; never mutates them."""
    from . import reference

    results_dir = os.fspath(results_dir)
    manifest_path = os.path.join(results_dir, MANIFEST_NAME)
    if not os.path.isfile(manifest_path):
        raise MissingArtifactsError(results_dir, [MANIFEST_NAME])
    cfg = config_from_manifest(manifest_path)
    missing = [name for name in expected_artifacts(cfg.task, cfg.architectures, cfg.runs)
               if not os.path.isfile(os.path.join(results_dir, name))]
    if missing:
        raise MissingArtifactsError(results_dir, sorted(missing))

    mean_curves = {
        arch: read_trace_csv(os.path.join(results_dir, mean_curve_name(cfg.task, arch)))
        for arch in cfg.architectures}
    lines = [
        f"experiment: {cfg.task} | architectures: {', '.join(cfg.architectures)} | "
        f"runs: {cfg.runs} | epochs: {cfg.epochs} | eta: {cfg.eta}",
        "",
        f"{'quantity':<44} {'measured':>18} {'reported':>18}",
        "-" * 82,
    ]

    def row(label: str, measured: str, reported: str) -> None:
        lines.append(f"{label:<44} {measured:>18} {reported:>18}")

    checks: list[str] = []

    if cfg.task == "iris":
        acc_rows = _read_metric_table(os.path.join(results_dir, "iris_accuracy.csv"))
        acc = {(r["architecture"], r["phase"]): (r["mean"], r["std"]) for r in acc_rows}
        for arch in cfg.architectures:
            for phase in ("training", "testing"):
                m = acc.get((arch, phase))
                ref = reference.REPORTED_IRIS_ACCURACY.get((arch, phase))
                row(f"iris {phase} accuracy % ({arch})",
                    "NA" if m is None else f"{_fmt(m[0])} ± {_fmt(m[1])}",
                    "NA" if ref is None else f"{ref[0]:.2f} ± {ref[1]:.2f}")
        for arch in cfg.architectures:
            final_db = float(mean_curves[arch]["mse_db"][-1])
            ref_db = (reference.REPORTED_IRIS_MSE_DB["co_at_2000"] if arch == "co"
                      else reference.REPORTED_IRIS_MSE_DB["baselines_at_2000"])
            row(f"iris final train MSE dB ({arch})", _fmt(final_db), _fmt(ref_db))
        lines += ["", "citations:",
                  f"  {reference.REPORTED_IRIS_ACCURACY_CITATION}",
                  f"  {reference.REPORTED_IRIS_MSE_CITATION}"]

        if {"co", "manual", "adaptive"} <= set(cfg.architectures):
            co_acc = acc.get(("co", "testing"))
            man_acc = acc.get(("manual", "testing"))
            ok5 = (co_acc and man_acc and co_acc[0] >= 96.5 - 1e-9
                   and co_acc[0] >= man_acc[0])
            checks.append(f"accuracy check (co testing >= 96.5% and >= manual): "
                          f"{'PASS' if ok5 else 'FAIL'}")
            co_db = np.asarray(mean_curves["co"]["mse_db"], dtype=np.float64)
            ok6a = float(co_db[-1]) <= -31.0
            checks.append(f"final-MSE check (co mean <= -31 dB): "
                          f"{'PASS' if ok6a else 'FAIL'} (measured {co_db[-1]:.2f} dB)")
            if cfg.epochs >= 240:
                base240 = min(float(np.asarray(mean_curves[a]["mse_db"])[239])
                              for a in ("manual", "adaptive"))
                ok6b = float(co_db[159]) <= base240
                checks.append(
                    f"early-convergence check (co@160 <= baselines@240): "
                    f"{'PASS' if ok6b else 'FAIL'} "
                    f"(co@160 {co_db[159]:.2f} vs {base240:.2f} dB)")
            ada_db = float(np.asarray(mean_curves["adaptive"]["mse_db"])[-1])
            ok7 = float(co_db[-1]) <= ada_db
            checks.append(f"ordering check (co final <= adaptive final): "
                          f"{'PASS' if ok7 else 'FAIL'} "
                          f"(co {co_db[-1]:.2f} vs adaptive {ada_db:.2f} dB)")

    elif cfg.task == "funapprox":
        finals = {}
        for arch in cfg.architectures:
            finals[arch] = float(np.asarray(mean_curves[arch]["mse_db"])[-1])
            ref_db = reference.REPORTED_FUNAPPROX_MSE_DB.get(arch)
            row(f"funapprox final train MSE dB ({arch})", _fmt(finals[arch]),
                _fmt(ref_db))
        max_abs = {}
        for arch in cfg.architectures:
            errs = read_test_errors_csv(
                os.path.join(results_dir, f"funapprox_{arch}_test_errors.csv"))
            max_abs[arch] = max(float(np.max(np.abs(e))) for e in errs.values())
            band = reference.REPORTED_FUNAPPROX_BAND.get(arch)
            row(f"funapprox max |test error| ({arch})", _fmt(max_abs[arch], 3),
                "NA" if band is None else f"[{band[0]}, {band[1]}]")
        lines += ["", "citations:", f"  {reference.REPORTED_FUNAPPROX_CITATION}"]
        if {"co", "manual", "adaptive"} <= set(cfg.architectures):
            ok8a = finals["co"] <= min(finals["manual"], finals["adaptive"])
            checks.append(f"ordering check (co final lowest): "
                          f"{'PASS' if ok8a else 'FAIL'} "
                          f"(co {finals['co']:.2f}, manual {finals['manual']:.2f}, "
                          f"adaptive {finals['adaptive']:.2f} dB)")
            ok8b = max_abs["co"] <= 0.15
            checks.append(f"test-error band check (co within ±0.15): "
                          f"{'PASS' if ok8b else 'FAIL'} (max {max_abs['co']:.3f})")
            ok7 = finals["co"] <= finals["adaptive"]
            checks.append(f"ordering check (co final <= adaptive final): "
                          f"{'PASS' if ok7 else 'FAIL'}")

    else:
        finals = {}
        to_level = {}
        for arch in cfg.architectures:
            db = np.asarray(mean_curves[arch]["mse_db"], dtype=np.float64)
            finals[arch] = float(db[-1])
            to_level[arch] = _epochs_to_level(db, finals[arch] + 0.5)
            row(f"sysid final train MSE dB ({arch})", _fmt(finals[arch]),
                f"±{reference.REPORTED_SYSID_MSE_DB_MAGNITUDE}")
            row(f"sysid epochs to final+0.5 dB ({arch})",
                "NA" if to_level[arch] is None else str(to_level[arch]), "fastest: co")
        lines += ["", "citations:", f"  {reference.REPORTED_SYSID_CITATION}"]
        if {"co", "manual", "adaptive"} <= set(cfg.architectures):
            ok9a = (to_level["co"] is not None
                    and all(to_level[a] is None or to_level["co"] < to_level[a]
                            for a in ("manual", "adaptive")))
            spread = max(finals.values()) - min(finals.values())
            ok9b = spread <= 1.0
            checks.append(f"convergence-speed check (co fastest to final+0.5 dB): "
                          f"{'PASS' if ok9a else 'FAIL'}")
            checks.append(f"final-MSE agreement check (spread <= 1 dB): "
                          f"{'PASS' if ok9b else 'FAIL'} (spread {spread:.3f} dB)")

    if checks:
        lines += ["", "acceptance checks:"]
        lines += [f"  {c}" for c in checks]
    with open(manifest_path, "r", encoding="utf-8") as fh:
        div_count = json.load(fh).get("divergence_count", 0)
    lines += ["", f"diverged runs: {div_count}"]
    return "\n".join(lines) + "\n"


def bound_probe(task: str, seed: int = 0, eta: float | None = None,
                funapprox_target_name: str = DEFAULT_FUNAPPROX_TARGET,
                sysid_centers: str = "symmetric") -> dict:
    """Compute the stable-learning-rate bound 1/lambda_max for a task's
    default design and flag whether the task's learning rate respects it."""
    if task not in TASKS:
        raise InvalidConfigError(f"unknown task {task!r}; expected one of {TASKS}")
    sigma = TASK_DEFAULTS[task]["sigma"]
    if task == "iris":
        train, _test = load_iris(seed=seed)
        bank = _iris_bank(train.X, sigma)
        X = train.X
    elif task == "funapprox":
        train, _test = gen_function_approx(funapprox_target(funapprox_target_name))
        bank = KernelBank(train.X.copy(), GaussianParams(sigma), CosineParams())
        X = train.X
    else:
        if sysid_centers not in SYSID_CENTER_SETS:
            raise InvalidConfigError(
                f"unknown sysid center set {sysid_centers!r}; "
                f"expected one of {tuple(SYSID_CENTER_SETS)}")
        signal = gen_sysid(seed=seed)
        X = signal.u.reshape(1, -1)
        centers = fixed_centers(np.array([[c] for c in SYSID_CENTER_SETS[sysid_centers]]))
        bank = KernelBank(centers, GaussianParams(sigma), CosineParams())
    bound = learning_rate_bound(kernel_matrix(X, bank))
    eta_used = TASK_DEFAULTS[task]["eta"] if eta is None else eta
    return {"task": task, "bound": bound, "eta": eta_used,
            "respects": bool(eta_used <= bound)}
