"""Network state and forward passes for the three fusion architectures.

An RbfModel couples a KernelBank with one of three fusion modes:

* FixedFusion: one weight per center; kernel responses are mixed by frozen
  convex coefficients.
* AdaptiveFusion: same shape, but the global mixing coefficients are trained.
* CoFusion: one weight per center per kernel, so each center mixes the
  kernels with its own local ratio.

The module also hosts the four-center diagnostic geometry on which single
kernels and global mixing produce exactly zero class separation while local
per-center weights do not, plus versioned JSON (de)serialization.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataFormatError,
    DimensionMismatchError,
    EmptyInputError,
    InvalidConfigError,
    InvalidModelError,
    PartitionError,
)
from .kernels import (
    CosineParams,
    GaussianParams,
    KernelBank,
    kernel_matrix,
    kernel_vector,
)

MODEL_FORMAT = "corbf-model/1"
MULTIHEAD_FORMAT = "corbf-multihead/1"


@dataclass(frozen=True)
class FixedFusion:
    """Frozen convex mix of the kernel responses (coefficients sum to 1)."""

    alpha_gaussian: float = 0.5
    alpha_cosine: float = 0.5

    def __post_init__(self):
        for name, a in (("alpha_gaussian", self.alpha_gaussian),
                        ("alpha_cosine", self.alpha_cosine)):
            if not (0.0 <= a <= 1.0):
                raise InvalidConfigError(f"FixedFusion {name} must be in [0, 1], got {a}")
        s = self.alpha_gaussian + self.alpha_cosine
        if abs(s - 1.0) > 1e-12:
            raise InvalidConfigError(
                f"FixedFusion coefficients must sum to 1, got {s!r}"
            )


@dataclass
class AdaptiveFusion:
    """Global kernel mixing coefficients, updated during training.

    After initialization the coefficients are unconstrained; only the trainer
    mutates them.
    """

    alpha_gaussian: float = 0.5
    alpha_cosine: float = 0.5

    def __post_init__(self):
        for name, a in (("alpha_gaussian", self.alpha_gaussian),
                        ("alpha_cosine", self.alpha_cosine)):
            if not np.isfinite(a):
                raise InvalidConfigError(f"AdaptiveFusion {name} must be finite, got {a}")


@dataclass(frozen=True)
class CoFusion:
    """Per-center, per-kernel weights; no shared coefficients to store."""


FusionMode = FixedFusion | AdaptiveFusion | CoFusion


def _mode_alphas(mode: FixedFusion | AdaptiveFusion, order: tuple[str, ...]) -> np.ndarray:
    by_name = {"gaussian": mode.alpha_gaussian, "cosine": mode.alpha_cosine}
    return np.array([by_name[name] for name in order], dtype=np.float64)


@dataclass
class RbfModel:
    """Learnable state: kernel bank, fusion mode, weights, bias.

    weights has shape (K,) under Fixed/Adaptive fusion (one weight per center)
    and (K, L) under CoFusion (one weight per center per kernel, column l for
    bank.kernel_order[l]). The model is a plain value object: forward passes
    never mutate it, only the trainer writes to it.
    """

    bank: KernelBank
    mode: FusionMode
    weights: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64)
        K, L = self.bank.n_centers, self.bank.n_kernels
        if isinstance(self.mode, CoFusion):
            if weights.shape != (K, L):
                raise InvalidModelError(
                    f"CoFusion weights must have shape ({K}, {L}), got {weights.shape}"
                )
        elif isinstance(self.mode, (FixedFusion, AdaptiveFusion)):
            if weights.shape != (K,):
                raise InvalidModelError(
                    f"{type(self.mode).__name__} weights must have shape ({K},), got {weights.shape}"
                )
        else:
            raise InvalidModelError(f"unknown fusion mode {self.mode!r}")
        if not np.all(np.isfinite(weights)):
            raise InvalidModelError("weights contain non-finite values")
        if not np.isfinite(self.bias):
            raise InvalidModelError(f"bias is non-finite: {self.bias}")
        self.weights = weights
        self.bias = float(self.bias)

    @property
    def n_params(self) -> int:
        """Count of trainable scalars, including bias and adaptive coefficients."""
        n = self.weights.size + 1
        if isinstance(self.mode, AdaptiveFusion):
            n += 2
        return n

    def copy(self) -> "RbfModel":
        mode = self.mode
        if isinstance(mode, AdaptiveFusion):
            mode = AdaptiveFusion(mode.alpha_gaussian, mode.alpha_cosine)
        return RbfModel(self.bank, mode, self.weights.copy(), self.bias)


def _forward_phi(model: RbfModel, phi: np.ndarray) -> float:
    """Output for a precomputed stacked response vector phi."""
    K = model.bank.n_centers
    if isinstance(model.mode, CoFusion):
        return float(np.dot(np.ravel(model.weights, order="F"), phi[1:]) + model.bias)
    alphas = _mode_alphas(model.mode, model.bank.kernel_order)
    mixed = np.zeros(K, dtype=np.float64)
    for l in range(model.bank.n_kernels):
        mixed += alphas[l] * phi[1 + l * K:1 + (l + 1) * K]
    return float(np.dot(model.weights, mixed) + model.bias)


def forward(model: RbfModel, x: np.ndarray) -> float:
    """Network output for one sample."""
    phi = kernel_vector(x, model.bank)
    return _forward_phi(model, phi)


def forward_batch(model: RbfModel, X: np.ndarray) -> np.ndarray:
    """Column-wise forward over X (shape (a, S)); entry j equals forward on column j."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError("forward_batch samples", 2, X.ndim)
    Phi = kernel_matrix(X, model.bank)
    return np.array(
        [_forward_phi(model, np.ascontiguousarray(Phi[:, j])) for j in range(X.shape[1])]
    )


def multiclass_decision(outputs: np.ndarray) -> int:
    """Index of the largest output; ties go to the lowest index."""
    outputs = np.atleast_1d(np.asarray(outputs, dtype=np.float64))
    if outputs.size == 0:
        raise EmptyInputError("multiclass_decision needs at least one output")
    return int(np.argmax(outputs))


@dataclass
class MultiHeadRbfModel:
    """One output head per class, all sharing a single kernel bank.

    Heads are trained against one-hot targets; predicted class is the argmax
    head output with lowest-index tie-break.
    """

    heads: list[RbfModel]
    class_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.heads:
            raise InvalidModelError("MultiHeadRbfModel needs at least one head")
        bank = self.heads[0].bank
        for i, h in enumerate(self.heads[1:], start=1):
            if h.bank is not bank:
                raise InvalidModelError(f"head {i} does not share the common kernel bank")
        adaptive = [h.mode for h in self.heads if isinstance(h.mode, AdaptiveFusion)]
        if len({id(m) for m in adaptive}) != len(adaptive):
            raise InvalidModelError(
                "heads with adaptive fusion must each own a distinct mode instance"
            )
        if not self.class_labels:
            self.class_labels = tuple(str(i) for i in range(len(self.heads)))
        if len(self.class_labels) != len(self.heads):
            raise InvalidModelError(
                f"{len(self.class_labels)} labels for {len(self.heads)} heads"
            )

    @property
    def bank(self) -> KernelBank:
        return self.heads[0].bank

    @property
    def n_classes(self) -> int:
        return len(self.heads)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """All head outputs for one sample, shape (C,)."""
        phi = kernel_vector(x, self.bank)
        return np.array([_forward_phi(h, phi) for h in self.heads])

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        """Head outputs for every column of X, shape (C, S)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise DimensionMismatchError("forward_batch samples", 2, X.ndim)
        Phi = kernel_matrix(X, self.bank)
        out = np.empty((self.n_classes, X.shape[1]), dtype=np.float64)
        for j in range(X.shape[1]):
            phi = np.ascontiguousarray(Phi[:, j])
            for c, h in enumerate(self.heads):
                out[c, j] = _forward_phi(h, phi)
        return out

    def decide(self, x: np.ndarray) -> int:
        return multiclass_decision(self.forward(x))

    def decide_batch(self, X: np.ndarray) -> np.ndarray:
        outputs = self.forward_batch(X)
        return np.array([multiclass_decision(outputs[:, j]) for j in range(outputs.shape[1])],
                        dtype=np.int64)

    def copy(self) -> "MultiHeadRbfModel":
        # RbfModel.copy keeps the bank object, so head copies still share it
        return MultiHeadRbfModel([h.copy() for h in self.heads], self.class_labels)


def center_contributions(model: RbfModel, x: np.ndarray) -> np.ndarray:
    """Per-center share of the output (bias excluded), shape (K,).

    Under Fixed/Adaptive fusion center k contributes w_k times the mixed
    response; under CoFusion it contributes the local weighted sum over
    kernels. Contributions sum to forward(model, x) - bias.
    """
    phi = kernel_vector(x, model.bank)
    K = model.bank.n_centers
    blocks = [phi[1 + l * K:1 + (l + 1) * K] for l in range(model.bank.n_kernels)]
    if isinstance(model.mode, CoFusion):
        out = np.zeros(K, dtype=np.float64)
        for l, block in enumerate(blocks):
            out += model.weights[:, l] * block
        return out
    alphas = _mode_alphas(model.mode, model.bank.kernel_order)
    mixed = np.zeros(K, dtype=np.float64)
    for l, block in enumerate(blocks):
        mixed += alphas[l] * block
    return model.weights * mixed


def discriminative_power(model: RbfModel, x: np.ndarray,
                         class_partition: tuple) -> float:
    """Class-A minus class-B response mass at x, bias excluded.

    class_partition is a pair of disjoint center-index collections that
    together cover every center of the bank. The result is the sum of
    per-center contributions over the first set minus the sum over the second;
    a value of zero means the model cannot separate the two classes at x
    beyond its bias.
    """
    set_a, set_b = class_partition
    idx_a = sorted(int(i) for i in set_a)
    idx_b = sorted(int(i) for i in set_b)
    K = model.bank.n_centers
    if set(idx_a) & set(idx_b):
        raise PartitionError(f"center partitions overlap: {sorted(set(idx_a) & set(idx_b))}")
    if set(idx_a) | set(idx_b) != set(range(K)):
        raise PartitionError(
            f"partition must cover all {K} centers, got {sorted(set(idx_a) | set(idx_b))}"
        )
    contrib = center_contributions(model, x)
    return float(np.sum(contrib[idx_a]) - np.sum(contrib[idx_b]))


# Geometry constant solved offline: with the pair offsets below, this vertical
# offset makes the two classes' cosine-kernel sums at the test point equal to
# the last bit (gap 0.0 in double precision).
_SCENARIO_V2 = 0.5826502786886404


@dataclass(frozen=True)
class Scenario4Center:
    """Two centers per class plus a test point, rigged so single kernels fail.

    The geometry satisfies, at the test point: equal cross distances
    (d(c1_a) = d(c2_b) and d(c2_a) = d(c1_b)), strictly ordered angles
    (a(c1_a) > a(c1_b) > a(c2_b) > a(c2_a)), and equal class-wise cosine
    response sums. verify() gates all four conditions before the geometry is
    used in any claim.
    """

    center1_a: np.ndarray
    center2_a: np.ndarray
    center1_b: np.ndarray
    center2_b: np.ndarray
    test_point: np.ndarray

    def __post_init__(self):
        for name in ("center1_a", "center2_a", "center1_b", "center2_b", "test_point"):
            v = np.asarray(getattr(self, name), dtype=np.float64)
            if v.shape != (2,):
                raise InvalidConfigError(f"{name} must be a 2-vector, got shape {v.shape}")
            object.__setattr__(self, name, v)

    @classmethod
    def default(cls) -> "Scenario4Center":
        t = np.array([6.0, 8.0])
        o1 = np.array([-1.5, 0.5])
        o2 = np.array([0.9, _SCENARIO_V2])
        return cls(
            center1_a=t - o1,
            center2_a=t - o2,
            center1_b=t - np.array([-o2[0], o2[1]]),
            center2_b=t - np.array([-o1[0], o1[1]]),
            test_point=t,
        )

    def centers(self) -> np.ndarray:
        """Center matrix (2, 4), columns in order c1_a, c2_a, c1_b, c2_b."""
        return np.stack(
            [self.center1_a, self.center2_a, self.center1_b, self.center2_b], axis=1
        )

    def partition(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Center-index sets (class A, class B) matching centers() order."""
        return (0, 1), (2, 3)

    def residuals(self, cosine: CosineParams = CosineParams()) -> dict[str, float]:
        """Signed violations of the four geometric conditions (0 is perfect)."""
        t = self.test_point

        def dist(c):
            return float(np.linalg.norm(t - c))

        def angle(c):
            denom = float(np.linalg.norm(t)) * float(np.linalg.norm(c))
            return float(np.arccos(np.clip(np.dot(t, c) / denom, -1.0, 1.0)))

        def cos_resp(c):
            num = float(np.dot(t, c))
            return num / (float(np.linalg.norm(t)) * float(np.linalg.norm(c)) + cosine.epsilon)

        a1a, a2a = angle(self.center1_a), angle(self.center2_a)
        a1b, a2b = angle(self.center1_b), angle(self.center2_b)
        return {
            "dist_gap_1": dist(self.center1_a) - dist(self.center2_b),
            "dist_gap_2": dist(self.center2_a) - dist(self.center1_b),
            "angle_margin_1": a1a - a1b,
            "angle_margin_2": a1b - a2b,
            "angle_margin_3": a2b - a2a,
            "cosine_sum_gap": (cos_resp(self.center1_a) + cos_resp(self.center2_a))
            - (cos_resp(self.center1_b) + cos_resp(self.center2_b)),
        }

    def verify(self, atol: float = 1e-9, cosine: CosineParams = CosineParams()) -> None:
        """Raise InvalidConfigError unless all four conditions hold within atol."""
        r = self.residuals(cosine)
        if abs(r["dist_gap_1"]) > atol or abs(r["dist_gap_2"]) > atol:
            raise InvalidConfigError(
                f"cross distances differ: {r['dist_gap_1']!r}, {r['dist_gap_2']!r}"
            )
        for key in ("angle_margin_1", "angle_margin_2", "angle_margin_3"):
            if not (r[key] > 0):
                raise InvalidConfigError(f"angle ordering violated at {key}: {r[key]!r}")
        if abs(r["cosine_sum_gap"]) > atol:
            raise InvalidConfigError(f"cosine sums differ: {r['cosine_sum_gap']!r}")


def _mode_to_dict(mode: FusionMode) -> dict:
    if isinstance(mode, FixedFusion):
        return {"kind": "fixed", "alpha_gaussian": mode.alpha_gaussian,
                "alpha_cosine": mode.alpha_cosine}
    if isinstance(mode, AdaptiveFusion):
        return {"kind": "adaptive", "alpha_gaussian": mode.alpha_gaussian,
                "alpha_cosine": mode.alpha_cosine}
    return {"kind": "co"}


def _mode_from_dict(d: dict) -> FusionMode:
    kind = d.get("kind")
    if kind == "fixed":
        return FixedFusion(d["alpha_gaussian"], d["alpha_cosine"])
    if kind == "adaptive":
        return AdaptiveFusion(d["alpha_gaussian"], d["alpha_cosine"])
    if kind == "co":
        return CoFusion()
    raise DataFormatError(f"unknown fusion kind {kind!r}")


def _bank_to_dict(bank: KernelBank) -> dict:
    return {
        "centers": bank.centers.tolist(),
        "sigma": bank.gaussian.sigma,
        "epsilon": bank.cosine.epsilon,
        "kernel_order": list(bank.kernel_order),
    }


def _bank_from_dict(d: dict) -> KernelBank:
    return KernelBank(
        centers=np.array(d["centers"], dtype=np.float64),
        gaussian=GaussianParams(sigma=d["sigma"]),
        cosine=CosineParams(epsilon=d["epsilon"]),
        kernel_order=tuple(d["kernel_order"]),
    )


def _head_to_dict(model: RbfModel) -> dict:
    return {"mode": _mode_to_dict(model.mode), "weights": model.weights.tolist(),
            "bias": model.bias}


def _head_from_dict(d: dict, bank: KernelBank) -> RbfModel:
    return RbfModel(bank, _mode_from_dict(d["mode"]),
                    np.array(d["weights"], dtype=np.float64), d["bias"])


def save_model(model: RbfModel | MultiHeadRbfModel, path: str | os.PathLike) -> None:
    """Write a model as versioned JSON; floats round-trip exactly."""
    if isinstance(model, MultiHeadRbfModel):
        doc = {
            "format": MULTIHEAD_FORMAT,
            "bank": _bank_to_dict(model.bank),
            "class_labels": list(model.class_labels),
            "heads": [_head_to_dict(h) for h in model.heads],
        }
    elif isinstance(model, RbfModel):
        doc = {
            "format": MODEL_FORMAT,
            "bank": _bank_to_dict(model.bank),
            **_head_to_dict(model),
        }
    else:
        raise InvalidModelError(f"cannot serialize {type(model).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str | os.PathLike) -> RbfModel | MultiHeadRbfModel:
    """Read a model written by save_model."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"not valid JSON: {exc}", path=str(path)) from exc
    fmt = doc.get("format")
    if fmt == MODEL_FORMAT:
        bank = _bank_from_dict(doc["bank"])
        return _head_from_dict(doc, bank)
    if fmt == MULTIHEAD_FORMAT:
        bank = _bank_from_dict(doc["bank"])
        heads = [_head_from_dict(h, bank) for h in doc["heads"]]
        return MultiHeadRbfModel(heads, tuple(doc["class_labels"]))
    raise DataFormatError(f"unsupported model format {fmt!r}", path=str(path))
