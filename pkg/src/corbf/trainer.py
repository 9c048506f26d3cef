"""Per-sample stochastic gradient descent for all three fusion architectures.

The training loop presents samples one at a time, in dataset order unless
shuffling is requested: compute the output, then the error, then apply every
increment from the pre-update parameter values. Epoch statistics (MSE over the
full training set, accuracies for classification) are computed after each
epoch finishes, never from the running instantaneous errors.

Also here: the stable learning-rate estimate 1 / lambda_max of the kernel
autocorrelation matrix, and a deterministic multi-seed experiment runner.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DataFormatError,
    DimensionMismatchError,
    DivergenceError,
    EmptyInputError,
    InvalidConfigError,
    InvalidModelError,
)
from .kernels import kernel_matrix, kernel_vector
from .metrics import mse_db_from_linear
from .model import (
    AdaptiveFusion,
    CoFusion,
    FixedFusion,
    MultiHeadRbfModel,
    RbfModel,
)

DIVERGENCE_LIMIT = 1e12

INIT_KINDS = ("uniform", "zeros", "keep")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run.

    init selects how weights and bias are set before the first epoch:
    "uniform" draws from [-init_scale, init_scale] seed-deterministically,
    "zeros" clears them, "keep" trains from the model's current values.
    Adaptive mixing coefficients are never redrawn; they train from their
    current values. alpha_eta defaults to eta when omitted.
    """

    eta: float
    epochs: int
    seed: int = 0
    shuffle: bool = False
    init: str = "uniform"
    init_scale: float = 0.1
    alpha_eta: float | None = None

    def __post_init__(self):
        if not (self.eta > 0):
            raise InvalidConfigError(f"eta must be > 0, got {self.eta}")
        if self.epochs < 1:
            raise InvalidConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.init not in INIT_KINDS:
            raise InvalidConfigError(f"init must be one of {INIT_KINDS}, got {self.init!r}")
        if not (self.init_scale >= 0):
            raise InvalidConfigError(f"init_scale must be >= 0, got {self.init_scale}")
        if self.alpha_eta is not None and not (self.alpha_eta > 0):
            raise InvalidConfigError(f"alpha_eta must be > 0, got {self.alpha_eta}")

    @property
    def effective_alpha_eta(self) -> float:
        return self.eta if self.alpha_eta is None else self.alpha_eta


@dataclass
class TrainTrace:
    """Per-epoch history of one training run plus the final model.

    mse_linear / mse_db cover the full training set, evaluated after each
    epoch. Accuracy arrays are present for classification runs only; test_acc
    additionally needs an evaluation set.
    """

    epochs: np.ndarray
    mse_linear: np.ndarray
    mse_db: np.ndarray
    train_acc: np.ndarray | None
    test_acc: np.ndarray | None
    final_model: RbfModel | MultiHeadRbfModel


def write_trace_csv(trace: TrainTrace, path: str | os.PathLike) -> None:
    """Write the per-epoch columns as CSV; missing accuracies become NA."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,mse_linear,mse_db,train_acc,test_acc\n")
        for i in range(len(trace.epochs)):
            ta = "NA" if trace.train_acc is None else repr(float(trace.train_acc[i]))
            va = "NA" if trace.test_acc is None else repr(float(trace.test_acc[i]))
            fh.write(
                f"{int(trace.epochs[i])},{repr(float(trace.mse_linear[i]))},"
                f"{repr(float(trace.mse_db[i]))},{ta},{va}\n"
            )


def read_trace_csv(path: str | os.PathLike) -> dict[str, np.ndarray | None]:
    """Parse a file written by write_trace_csv back into column arrays."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "epoch,mse_linear,mse_db,train_acc,test_acc":
            raise DataFormatError(f"unexpected header {header!r}", path=str(path), line=1)
        cols: dict[str, list] = {"epoch": [], "mse_linear": [], "mse_db": [],
                                 "train_acc": [], "test_acc": []}
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != 5:
                raise DataFormatError(
                    f"expected 5 fields, got {len(parts)}", path=str(path), line=lineno
                )
            try:
                cols["epoch"].append(int(parts[0]))
                cols["mse_linear"].append(float(parts[1]))
                cols["mse_db"].append(float(parts[2]))
                cols["train_acc"].append(None if parts[3] == "NA" else float(parts[3]))
                cols["test_acc"].append(None if parts[4] == "NA" else float(parts[4]))
            except ValueError as exc:
                raise DataFormatError(str(exc), path=str(path), line=lineno) from exc
    out: dict[str, np.ndarray | None] = {
        "epoch": np.array(cols["epoch"], dtype=np.int64),
        "mse_linear": np.array(cols["mse_linear"], dtype=np.float64),
        "mse_db": np.array(cols["mse_db"], dtype=np.float64),
    }
    for key in ("train_acc", "test_acc"):
        vals = cols[key]
        out[key] = None if any(v is None for v in vals) else np.array(vals, dtype=np.float64)
    return out


def _kernel_block(phi: np.ndarray, bank, name: str) -> np.ndarray:
    K = bank.n_centers
    l = bank.kernel_order.index(name)
    return phi[1 + l * K:1 + (l + 1) * K]


def _guard(e: float, epoch: int, sample: int) -> None:
    if not (abs(e) <= DIVERGENCE_LIMIT):
        raise DivergenceError(epoch, sample, e)


def _full_co_vector(model: RbfModel) -> np.ndarray:
    """[bias, weights column-stacked by kernel]: the trained flat layout."""
    return np.concatenate(([model.bias], np.ravel(model.weights, order="F")))


def sgd_step(model: RbfModel, x: np.ndarray, d: float, eta: float,
             alpha_eta: float | None = None, epoch: int = 0, sample: int = 0) -> float:
    """One per-sample update, in place; returns the pre-update error e.

    Ordering: output first, then e = d - output, then every parameter
    increment computed from pre-update values. Under CoFusion each
    (center, kernel) weight moves by eta*e times its own response; under
    Fixed/Adaptive each center weight moves by eta*e times the mixed response;
    Adaptive additionally moves the two mixing coefficients by alpha_eta*e
    times the corresponding unmixed response sums.
    """
    if not (eta > 0):
        raise InvalidConfigError(f"eta must be > 0, got {eta}")
    a_eta = eta if alpha_eta is None else alpha_eta
    phi = kernel_vector(x, model.bank)
    bank = model.bank
    if isinstance(model.mode, CoFusion):
        w_full = _full_co_vector(model)
        y = float(np.dot(w_full, phi))
        e = float(d) - y
        _guard(e, epoch, sample)
        w_full += (eta * e) * phi
        model.bias = float(w_full[0])
        model.weights = w_full[1:].reshape((bank.n_kernels, bank.n_centers)).T.copy()
        return e
    pg = _kernel_block(phi, bank, "gaussian")
    pc = _kernel_block(phi, bank, "cosine")
    ag, ac = model.mode.alpha_gaussian, model.mode.alpha_cosine
    if isinstance(model.mode, FixedFusion):
        g = np.concatenate(([1.0], ag * pg + ac * pc))
        w_full = np.concatenate(([model.bias], model.weights))
        y = float(np.dot(w_full, g))
        e = float(d) - y
        _guard(e, epoch, sample)
        w_full += (eta * e) * g
        model.bias = float(w_full[0])
        model.weights = w_full[1:].copy()
        return e
    # adaptive: weight/bias moves use pre-update coefficients, coefficient
    # moves use pre-update weights
    sg = float(np.dot(model.weights, pg))
    sc = float(np.dot(model.weights, pc))
    y = ag * sg + ac * sc + model.bias
    e = float(d) - y
    _guard(e, epoch, sample)
    model.weights = model.weights + (eta * e) * (ag * pg + ac * pc)
    model.bias = float(model.bias + eta * e)
    model.mode.alpha_gaussian = float(ag + a_eta * e * sg)
    model.mode.alpha_cosine = float(ac + a_eta * e * sc)
    return e


def _one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DimensionMismatchError("class labels", 1, labels.ndim)
    idx = labels.astype(np.int64)
    if np.any(idx < 0) or np.any(idx >= n_classes):
        raise InvalidConfigError(
            f"labels must lie in [0, {n_classes}), got range "
            f"[{idx.min()}, {idx.max()}]"
        )
    out = np.zeros((n_classes, labels.shape[0]), dtype=np.float64)
    out[idx, np.arange(labels.shape[0])] = 1.0
    return out


def _targets_matrix(model, D) -> tuple[np.ndarray, np.ndarray | None]:
    """Normalize targets to a (C, S) matrix; returns (targets, labels or None)."""
    D = np.asarray(D, dtype=np.float64)
    if isinstance(model, MultiHeadRbfModel):
        C = model.n_classes
        if D.ndim == 1:
            labels = np.asarray(D).astype(np.int64)
            return _one_hot(labels, C), labels
        if D.shape[0] != C:
            raise DimensionMismatchError("target rows vs heads", C, D.shape[0])
        return D, None
    if D.ndim != 1:
        raise DimensionMismatchError("regression targets", 1, D.ndim)
    return D[np.newaxis, :], None


def _draw_init(rng: np.random.Generator, cfg: TrainConfig, n: int) -> np.ndarray:
    if cfg.init == "uniform":
        return rng.uniform(-cfg.init_scale, cfg.init_scale, size=n)
    return np.zeros(n, dtype=np.float64)


def fit(model: RbfModel | MultiHeadRbfModel, X: np.ndarray, D,
        cfg: TrainConfig, eval_set=None) -> TrainTrace:
    """Train in place for cfg.epochs passes over X (shape (a, S)).

    D is a real target vector (S,) for a single-output model; for a multi-head
    model it is either an integer label vector (S,) (one-hot targets are built
    internally, coding {0, 1}) or an explicit (C, S) target matrix. eval_set,
    a (X_test, labels_test) pair, enables the per-epoch test-accuracy column
    and is meaningful for classification runs only.

    Deterministic given (cfg.seed, inputs): initialization and the optional
    per-epoch shuffle each draw from their own seed-derived stream. Divergence
    (|e| > 1e12 or non-finite) raises DivergenceError naming epoch and sample.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError("training samples", 2, X.ndim)
    S = X.shape[1]
    if S == 0:
        raise EmptyInputError("fit needs at least one training sample")
    heads = model.heads if isinstance(model, MultiHeadRbfModel) else [model]
    C = len(heads)
    bank = heads[0].bank
    mode = heads[0].mode
    for h in heads[1:]:
        if type(h.mode) is not type(mode):
            raise InvalidModelError("all heads must use the same fusion mode")
    if isinstance(mode, FixedFusion):
        for h in heads[1:]:
            if (h.mode.alpha_gaussian, h.mode.alpha_cosine) != (
                mode.alpha_gaussian, mode.alpha_cosine
            ):
                raise InvalidModelError("fixed-fusion heads must share coefficients")
    Dmat, labels = _targets_matrix(model, D)
    if Dmat.shape[1] != S:
        raise DimensionMismatchError("targets vs samples", S, Dmat.shape[1])

    classification = isinstance(model, MultiHeadRbfModel)
    K = bank.n_centers
    Phi = kernel_matrix(X, bank)
    PhiT = np.ascontiguousarray(Phi.T)
    Drows = np.ascontiguousarray(Dmat.T)

    eval_phi = eval_labels = None
    if eval_set is not None and classification:
        X_eval, d_eval = eval_set
        eval_phi = kernel_matrix(np.asarray(X_eval, dtype=np.float64), bank)
        eval_labels = np.asarray(d_eval).astype(np.int64)

    ss = np.random.SeedSequence(cfg.seed)
    init_ss, shuffle_ss = ss.spawn(2)
    rng_init = np.random.default_rng(init_ss)
    rng_shuffle = np.random.default_rng(shuffle_ss)

    eta = cfg.eta
    a_eta = cfg.effective_alpha_eta
    mse_lin: list[float] = []
    train_acc: list[float] = []
    test_acc: list[float] = []

    ig = bank.kernel_order.index("gaussian")
    ic = bank.kernel_order.index("cosine")
    Pg = np.ascontiguousarray(Phi[1 + ig * K:1 + (ig + 1) * K, :])
    Pc = np.ascontiguousarray(Phi[1 + ic * K:1 + (ic + 1) * K, :])

    truth = None
    if classification:
        truth = labels if labels is not None else np.argmax(Dmat, axis=0)

    def record_epoch(Y: np.ndarray) -> None:
        err = Dmat - Y
        mse_lin.append(float(np.mean(err * err)))
        if classification:
            train_acc.append(float(np.mean(np.argmax(Y, axis=0) == truth)))

    if isinstance(mode, AdaptiveFusion):
        Wc = np.empty((C, K))
        B = np.empty(C)
        Ag = np.empty(C)
        Ac = np.empty(C)
        for c, h in enumerate(heads):
            if cfg.init == "keep":
                Wc[c] = h.weights
                B[c] = h.bias
            else:
                draw = _draw_init(rng_init, cfg, 1 + K)
                B[c] = draw[0]
                Wc[c] = draw[1:]
            Ag[c] = h.mode.alpha_gaussian
            Ac[c] = h.mode.alpha_cosine
        PgT = np.ascontiguousarray(Pg.T)
        PcT = np.ascontiguousarray(Pc.T)
        single = C == 1
        for t in range(cfg.epochs):
            order = rng_shuffle.permutation(S) if cfg.shuffle else range(S)
            if single:
                w, d0 = Wc[0], Drows[:, 0]
                b, ag, ac = float(B[0]), float(Ag[0]), float(Ac[0])
                for s in order:
                    pg, pc = PgT[s], PcT[s]
                    sg = float(np.dot(w, pg))
                    sc = float(np.dot(w, pc))
                    y = ag * sg + ac * sc + b
                    e = d0[s] - y
                    if not (abs(e) <= DIVERGENCE_LIMIT):
                        raise DivergenceError(t + 1, int(s) + 1, e)
                    w += (eta * e) * (ag * pg + ac * pc)
                    b += eta * e
                    ag += a_eta * e * sg
                    ac += a_eta * e * sc
                B[0], Ag[0], Ac[0] = b, ag, ac
            else:
                for s in order:
                    pg, pc = PgT[s], PcT[s]
                    SG = Wc @ pg
                    SC = Wc @ pc
                    y = Ag * SG + Ac * SC + B
                    e = Drows[s] - y
                    if not np.all(np.abs(e) <= DIVERGENCE_LIMIT):
                        raise DivergenceError(t + 1, int(s) + 1, float(e[np.argmax(np.abs(e))]))
                    Wc += (eta * e)[:, None] * (Ag[:, None] * pg + Ac[:, None] * pc)
                    B += eta * e
                    Ag += a_eta * e * SG
                    Ac += a_eta * e * SC
            Y = Ag[:, None] * (Wc @ Pg) + Ac[:, None] * (Wc @ Pc) + B[:, None]
            record_epoch(Y)
            if eval_phi is not None:
                Pg_e = eval_phi[1 + ig * K:1 + (ig + 1) * K, :]
                Pc_e = eval_phi[1 + ic * K:1 + (ic + 1) * K, :]
                Y_e = Ag[:, None] * (Wc @ Pg_e) + Ac[:, None] * (Wc @ Pc_e) + B[:, None]
                test_acc.append(float(np.mean(np.argmax(Y_e, axis=0) == eval_labels)))
        for c, h in enumerate(heads):
            h.weights = Wc[c].copy()
            h.bias = float(B[c])
            h.mode.alpha_gaussian = float(Ag[c])
            h.mode.alpha_cosine = float(Ac[c])
    else:
        # fixed and co fusion reduce to linear SGD on a precomputed design
        if isinstance(mode, CoFusion):
            DS = PhiT
            Q = DS.shape[1]
        else:
            Q = 1 + K
            DS = np.empty((S, Q))
            DS[:, 0] = 1.0
            DS[:, 1:] = (mode.alpha_gaussian * Pg + mode.alpha_cosine * Pc).T
        W = np.empty((C, Q))
        for c, h in enumerate(heads):
            if cfg.init == "keep":
                if isinstance(mode, CoFusion):
                    W[c] = _full_co_vector(h)
                else:
                    W[c, 0] = h.bias
                    W[c, 1:] = h.weights
            else:
                W[c] = _draw_init(rng_init, cfg, Q)
        single = C == 1
        DST = np.ascontiguousarray(DS.T)
        for t in range(cfg.epochs):
            order = rng_shuffle.permutation(S) if cfg.shuffle else range(S)
            if single:
                w, d0 = W[0], Drows[:, 0]
                for s in order:
                    row = DS[s]
                    y = float(np.dot(w, row))
                    e = d0[s] - y
                    if not (abs(e) <= DIVERGENCE_LIMIT):
                        raise DivergenceError(t + 1, int(s) + 1, e)
                    w += (eta * e) * row
            else:
                for s in order:
                    row = DS[s]
                    y = W @ row
                    e = Drows[s] - y
                    if not np.all(np.abs(e) <= DIVERGENCE_LIMIT):
                        raise DivergenceError(t + 1, int(s) + 1, float(e[np.argmax(np.abs(e))]))
                    W += (eta * e)[:, None] * row
            Y = W @ DST
            record_epoch(Y)

            if eval_phi is not None:
                if isinstance(mode, CoFusion):
                    Y_e = W @ eval_phi
                else:
                    Pg_e = eval_phi[1 + ig * K:1 + (ig + 1) * K, :]
                    Pc_e = eval_phi[1 + ic * K:1 + (ic + 1) * K, :]
                    G_e = np.empty((Q, eval_phi.shape[1]))
                    G_e[0] = 1.0
                    G_e[1:] = mode.alpha_gaussian * Pg_e + mode.alpha_cosine * Pc_e
                    Y_e = W @ G_e
                preds = np.argmax(Y_e, axis=0)
                test_acc.append(float(np.mean(preds == eval_labels)))
        for c, h in enumerate(heads):
            h.bias = float(W[c, 0])
            if isinstance(mode, CoFusion):
                h.weights = W[c, 1:].reshape((bank.n_kernels, K)).T.copy()
            else:
                h.weights = W[c, 1:].copy()

    mse_arr = np.array(mse_lin)
    trace = TrainTrace(
        epochs=np.arange(1, cfg.epochs + 1, dtype=np.int64),
        mse_linear=mse_arr,
        mse_db=np.array([mse_db_from_linear(v) for v in mse_lin]),
        train_acc=np.array(train_acc) if classification else None,
        test_acc=np.array(test_acc) if (classification and eval_phi is not None) else None,
        final_model=model.copy(),
    )
    return trace


def learning_rate_bound(Phi: np.ndarray) -> float:
    """1 / lambda_max of R = (1/S) * sum of phi phi^T over the columns of Phi.

    lambda_max comes from power iteration started at the normalized all-ones
    vector, run to a 1e-10 relative residual with a 10000-iteration cap.
    Training with a learning rate below the returned value keeps the mean
    weight trajectory stable.
    """
    Phi = np.asarray(Phi, dtype=np.float64)
    if Phi.ndim != 2:
        raise DimensionMismatchError("kernel design matrix", 2, Phi.ndim)
    P, S = Phi.shape
    if P == 0 or S == 0:
        raise EmptyInputError("learning_rate_bound needs a non-empty design matrix")
    R = (Phi @ Phi.T) / S
    if not np.any(R):
        raise EmptyInputError("kernel responses are all zero; the bound is undefined")
    v = np.ones(P) / np.sqrt(P)
    lam = 0.0
    for _ in range(10000):
        w = R @ v
        lam = float(np.dot(v, w))
        if np.linalg.norm(w - lam * v) <= 1e-10 * max(lam, 1e-300):
            break
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            # start vector hit the null space; restart on the heaviest axis
            v = np.zeros(P)
            v[int(np.argmax(np.diag(R)))] = 1.0
            continue
        v = w / nw
    if lam <= 0:
        raise EmptyInputError("dominant eigenvalue estimate is not positive")
    return 1.0 / lam


@dataclass
class RunAggregate:
    """Mean and sample standard deviation of every metric across seeds.

    per_run holds one metric dict per successful seed in seed order; diverged
    lists the seeds whose runs tripped the divergence guard (excluded from the
    aggregates but counted here).
    """

    metrics: dict[str, tuple[float, float]]
    per_run: list[dict[str, float]]
    seeds: list[int]
    diverged: list[int]

    @property
    def n_completed(self) -> int:
        return len(self.per_run)


def multi_seed_run(run_fn: Callable[[int], dict[str, float]], n_runs: int,
                   seed0: int = 0) -> RunAggregate:
    """Run run_fn(seed) for seeds seed0 .. seed0+n_runs-1 and aggregate.

    Runs execute in seed order, so aggregation is deterministic. A run that
    raises DivergenceError is excluded from the statistics and recorded in
    .diverged. Sample standard deviation uses ddof=1; a single completed run
    reports std 0.0.
    """
    if n_runs < 1:
        raise InvalidConfigError(f"n_runs must be >= 1, got {n_runs}")
    per_run: list[dict[str, float]] = []
    seeds: list[int] = []
    diverged: list[int] = []
    for i in range(n_runs):
        seed = seed0 + i
        try:
            result = run_fn(seed)
        except DivergenceError:
            diverged.append(seed)
            continue
        per_run.append(dict(result))
        seeds.append(seed)
    metrics: dict[str, tuple[float, float]] = {}
    if per_run:
        for name in per_run[0]:
            vals = np.array([r[name] for r in per_run], dtype=np.float64)
            std = 0.0 if len(vals) == 1 else float(np.std(vals, ddof=1))
            metrics[name] = (float(np.mean(vals)), std)
    return RunAggregate(metrics=metrics, per_run=per_run, seeds=seeds, diverged=diverged)
