"""Kernels on the predictor space and the two ``n x n`` Gram matrices.

Every estimator in :mod:`kcmd.estimators` consumes a :class:`GramPair` and
nothing else, so vector and functional data look identical past this
module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateSampleError, ShapeMismatchError, UsageError
from .hilbert import HilbertPoint, Sample, Side, inner_product, squared_distance


@dataclass(frozen=True)
class Gaussian:
    """``K(x, x') = exp(-omega**2 * ||x - x'||**2)``; bounded by 1."""

    omega: float

    def __post_init__(self):
        omega = float(self.omega)
        if not np.isfinite(omega) or omega <= 0:
            raise UsageError(f"Gaussian omega must be a positive finite number, got {self.omega!r}")
        object.__setattr__(self, "omega", omega)

    bounded = True

    def to_dict(self) -> dict:
        return {"kind": "gaussian", "omega": self.omega}


@dataclass(frozen=True)
class Linear:
    """``K(x, x') = <x, x'>``.

    Unbounded, so the asymptotic theory does not cover it. Meant only for
    small analytic cross-checks; construction requires
    ``allow_unbounded=True``.
    """

    allow_unbounded: bool = False

    def __post_init__(self):
        if not self.allow_unbounded:
            raise UsageError(
                "the linear kernel is unbounded and not covered by the test's "
                "assumptions; pass allow_unbounded=True to use it anyway"
            )

    bounded = False

    def to_dict(self) -> dict:
        return {"kind": "linear"}


KernelSpec = Union[Gaussian, Linear]


def eval_kernel(spec: KernelSpec, a: HilbertPoint, b: HilbertPoint) -> float:
    """Evaluate ``K(a, b)`` for a single pair of points."""
    if isinstance(spec, Gaussian):
        return float(np.exp(-spec.omega**2 * squared_distance(a, b)))
    if isinstance(spec, Linear):
        return inner_product(a, b)
    raise UsageError(f"unknown kernel spec {spec!r}")


def pairwise_sq_distances(side: Side) -> np.ndarray:
    """``D[i, j] = ||X_i - X_j||^2`` (trapezoid-weighted for curves).

    Accumulated one coordinate at a time from the differences
    ``X_i[k] - X_j[k]``, so every entry comes from one fixed expression and
    ``D`` is exactly symmetric.
    """
    vals, q = side.values, side.quad
    n = vals.shape[0]
    out = np.zeros((n, n))
    for k in range(vals.shape[1]):
        col = vals[:, k]
        diff = col[:, None] - col[None, :]
        out += q[k] * (diff * diff)
    return out


def inner_product_matrix(side: Side) -> np.ndarray:
    """``G[i, j] = <Y_i, Y_j>`` (trapezoid-weighted for curves)."""
    vals, q = side.values, side.quad
    n = vals.shape[0]
    out = np.zeros((n, n))
    for k in range(vals.shape[1]):
        col = vals[:, k]
        out += q[k] * (col[:, None] * col[None, :])
    return out


def kernel_matrix(spec: KernelSpec, side: Side) -> np.ndarray:
    if isinstance(spec, Gaussian):
        return np.exp(-(spec.omega**2) * pairwise_sq_distances(side))
    if isinstance(spec, Linear):
        return inner_product_matrix(side)
    raise UsageError(f"unknown kernel spec {spec!r}")


@dataclass(frozen=True, eq=False)
class GramPair:
    """``kx[i, j] = K(X_i, X_j)`` and ``gy[i, j] = <Y_i, Y_j>``."""

    kx: np.ndarray
    gy: np.ndarray

    def __post_init__(self):
        kx = np.array(self.kx, dtype=np.float64)
        gy = np.array(self.gy, dtype=np.float64)
        if kx.ndim != 2 or kx.shape[0] != kx.shape[1] or kx.shape != gy.shape:
            raise ShapeMismatchError(
                f"Gram matrices must be square and of equal size, got {kx.shape} and {gy.shape}"
            )
        kx.setflags(write=False)
        gy.setflags(write=False)
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "gy", gy)

    @property
    def n(self) -> int:
        return self.kx.shape[0]

    def permuted(self, perm) -> "GramPair":
        perm = np.asarray(perm)
        ix = np.ix_(perm, perm)
        return GramPair(self.kx[ix], self.gy[ix])


def gram_pair(spec: KernelSpec, sample: Sample) -> GramPair:
    return GramPair(kernel_matrix(spec, sample.x), inner_product_matrix(sample.y))


def median_heuristic(sample: Union[Sample, Side]) -> float:
    """Bandwidth ``omega`` with ``omega**2 = 1 / median`` of the positive
    pairwise squared distances between the ``X_i``.

    For an even number of distances the median is the midpoint of the two
    central values.
    """
    side = sample.x if isinstance(sample, Sample) else sample
    n = len(side)
    if n < 2:
        raise DegenerateSampleError("the median heuristic needs at least two observations")
    d2 = pairwise_sq_distances(side)[np.triu_indices(n, 1)]
    d2 = d2[d2 > 0]
    if d2.size == 0:
        raise DegenerateSampleError("all X observations coincide; no bandwidth can be chosen")
    return float(1.0 / np.sqrt(np.median(d2)))


def resolve_kernel(kernel, sample: Sample) -> KernelSpec:
    """Turn ``"median"`` (or ``None``) into a Gaussian with median-heuristic bandwidth."""
    if kernel is None or (isinstance(kernel, str) and kernel == "median"):
        return Gaussian(median_heuristic(sample))
    if isinstance(kernel, (Gaussian, Linear)):
        return kernel
    raise UsageError(f"unsupported kernel {kernel!r}")
