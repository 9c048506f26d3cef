"""Primary kernels (Gaussian, cosine) and the stacked kernel response vector.

All evaluations are double precision with a fixed operation order, so repeated
calls on identical inputs are bit-identical, and the stacked vector is built
from the very same scalar evaluations exposed by gaussian_kernel and
cosine_kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidConfigError

KERNEL_NAMES = ("gaussian", "cosine")


@dataclass(frozen=True)
class GaussianParams:
    """Width parameter of the Gaussian kernel, in input-space distance units."""

    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0):
            raise InvalidConfigError(f"gaussian sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class CosineParams:
    """Denominator guard for the cosine kernel.

    epsilon keeps the quotient defined when either vector is zero; it must stay
    far below the typical product of input and center norms.
    """

    epsilon: float = 1e-8

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise InvalidConfigError(f"cosine epsilon must be > 0, got {self.epsilon}")


@dataclass(frozen=True)
class KernelBank:
    """Immutable set of centers plus kernel parameters shared by the network.

    centers has one column per hidden unit (shape (a, K)). kernel_order fixes
    the layout of the stacked response vector: bias first, then K responses per
    kernel in this order.
    """

    centers: np.ndarray
    gaussian: GaussianParams = field(default_factory=GaussianParams)
    cosine: CosineParams = field(default_factory=CosineParams)
    kernel_order: tuple[str, ...] = KERNEL_NAMES

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        if centers.ndim != 2 or centers.shape[1] < 1:
            raise InvalidConfigError(
                f"centers must be a 2-D matrix with at least one column, got shape {centers.shape}"
            )
        if not np.all(np.isfinite(centers)):
            raise InvalidConfigError("centers contain non-finite values")
        if len(set(self.kernel_order)) != len(self.kernel_order):
            raise InvalidConfigError(f"duplicate kernel in order {self.kernel_order}")
        for name in self.kernel_order:
            if name not in KERNEL_NAMES:
                raise InvalidConfigError(f"unknown kernel {name!r}")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)

    @property
    def input_dim(self) -> int:
        return self.centers.shape[0]

    @property
    def n_centers(self) -> int:
        return self.centers.shape[1]

    @property
    def n_kernels(self) -> int:
        return len(self.kernel_order)

    @property
    def vector_len(self) -> int:
        """Length of the stacked response vector: 1 + K * L."""
        return 1 + self.n_centers * self.n_kernels


def _as_vector(what: str, x, dim: int) -> np.ndarray:
    # Contiguity matters: dot products can differ by an ulp between strided
    # and contiguous code paths, which would break the bit-exactness contract
    # between scalar kernels and the stacked/batch assemblers.
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))
    actual = x.shape[0] if x.ndim == 1 else -1
    if actual != dim:
        raise DimensionMismatchError(what, dim, actual)
    return x


def _check_pair(op: str, x, m) -> tuple[np.ndarray, np.ndarray]:
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))
    if x.ndim != 1:
        raise DimensionMismatchError(f"{op} input", 1, x.ndim)
    m = _as_vector(f"{op} center vs input", m, x.shape[0])
    return x, m


def _gaussian(x: np.ndarray, m: np.ndarray, sigma: float) -> float:
    diff = x - m
    sq_dist = float(np.dot(diff, diff))
    return float(np.exp(-sq_dist / (sigma * sigma)))


def _cosine(x: np.ndarray, m: np.ndarray, epsilon: float) -> float:
    num = float(np.dot(x, m))
    denom = float(np.linalg.norm(x)) * float(np.linalg.norm(m)) + epsilon
    return num / denom


def gaussian_kernel(x: np.ndarray, m: np.ndarray, p: GaussianParams) -> float:
    """exp(-||x - m||^2 / sigma^2); equals 1 at x == m, decays with distance."""
    x, m = _check_pair("gaussian_kernel", x, m)
    return _gaussian(x, m, p.sigma)


def cosine_kernel(x: np.ndarray, m: np.ndarray, p: CosineParams) -> float:
    """(x . m) / (||x|| ||m|| + epsilon); 0 whenever either vector is zero."""
    x, m = _check_pair("cosine_kernel", x, m)
    return _cosine(x, m, p.epsilon)


_SCALAR = {"gaussian": lambda x, m, bank: _gaussian(x, m, bank.gaussian.sigma),
           "cosine": lambda x, m, bank: _cosine(x, m, bank.cosine.epsilon)}


def kernel_vector(x: np.ndarray, bank: KernelBank) -> np.ndarray:
    """Stacked response [1, gaussian responses (K,), cosine responses (K,)].

    The leading 1 is the bias channel. Layout follows bank.kernel_order and is
    fixed project-wide so weight indexing stays unambiguous. Entries are the
    exact scalar kernel values, element for element.
    """
    x = _as_vector("kernel_vector input vs bank", x, bank.input_dim)
    K = bank.n_centers
    out = np.empty(bank.vector_len, dtype=np.float64)
    out[0] = 1.0
    columns = [np.ascontiguousarray(bank.centers[:, k]) for k in range(K)]
    for i, name in enumerate(bank.kernel_order):
        scalar = _SCALAR[name]
        base = 1 + i * K
        for k in range(K):
            out[base + k] = scalar(x, columns[k], bank)
    return out


def kernel_matrix(X: np.ndarray, bank: KernelBank) -> np.ndarray:
    """Column-wise kernel_vector over a sample matrix X of shape (a, S).

    Column j is bit-identical to kernel_vector(X[:, j], bank).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != bank.input_dim:
        raise DimensionMismatchError(
            "kernel_matrix samples vs bank",
            bank.input_dim,
            X.shape[0] if X.ndim == 2 else -1,
        )
    Phi = np.empty((bank.vector_len, X.shape[1]), dtype=np.float64)
    for j in range(X.shape[1]):
        Phi[:, j] = kernel_vector(np.ascontiguousarray(X[:, j]), bank)
    return Phi
