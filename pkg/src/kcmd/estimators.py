"""Estimators of the kernel conditional mean dependence measure.

All functions take a :class:`~kcmd.kernels.GramPair` with
``K = kx`` (kernel on X) and ``G = gy`` (inner products on Y) and run in
``O(n**2)``. With row sums ``rK_i = sum_j K_ij`` and ``rG_i = sum_j G_ij``
the plug-in estimator

    1/n^2 sum_ij G_ij K_ij + 1/n^4 (sum G)(sum K) - 2/n^3 sum_{i,j,q} G_iq K_ij

collapses to

    1/n^2 sum(G * K) + 1/n^4 sum(G) sum(K) - 2/n^3 sum_i rG_i rK_i .

The weighted estimator multiplies the ``i``-th summand of the last term by
``w_i``. Sums go through numpy's pairwise summation, which fixes the
accumulation order and keeps results reproducible.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InvalidCertificateError, LengthMismatchError, SampleTooSmallError, UsageError
from .kernels import GramPair
from .weights import WeightCertificate, WeightFamily, certificate, generate


def _double_center(a: np.ndarray) -> np.ndarray:
    row = a.mean(axis=1)
    col = a.mean(axis=0)
    return a - row[:, None] - col[None, :] + a.mean()


def kcmd_naive(g: GramPair) -> float:
    """Plug-in estimator: squared HS norm of the empirical cross-covariance.

    Evaluated as ``1/n^2 sum_ij <Y_i - Ybar, Y_j - Ybar> K_ij``, which is
    algebraically the three-term expansion with unit weights but keeps the
    result nonnegative up to roundoff.
    """
    n = g.n
    return float(np.sum(_double_center(g.gy) * g.kx) / n**2)


def kcmd_weighted(g: GramPair, w) -> float:
    """Plug-in estimator with weights ``w`` in the cross-product term.

    Unlike the naive estimator this can be negative, and it depends on the
    order of the observations since each weight is tied to a position.
    """
    w = np.asarray(w, dtype=np.float64)
    n = g.n
    if w.shape != (n,):
        raise LengthMismatchError(f"expected {n} weights, got shape {w.shape}")
    K, G = g.kx, g.gy
    rK = K.sum(axis=1)
    rG = G.sum(axis=1)
    first = np.sum(G * K) / n**2
    second = (G.sum() / n**2) * (K.sum() / n**2)
    cross = 2.0 * np.sum(w * rG * rK) / n**3
    return float(first + second - cross)


def _u_center(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    a = a.copy()
    np.fill_diagonal(a, 0.0)
    row = a.sum(axis=1) / (n - 2)
    col = a.sum(axis=0) / (n - 2)
    grand = a.sum() / ((n - 1) * (n - 2))
    out = a - row[:, None] - col[None, :] + grand
    np.fill_diagonal(out, 0.0)
    return out


def kcmd_ustat(g: GramPair) -> float:
    """Unbiased U-statistic ``1/(n(n-3)) sum_{i != j} C_ij D_ij``.

    ``C`` and ``D`` are the U-centred versions of ``K`` and ``G`` with the
    diagonals removed. The kernel matrix is taken on ``(X_i, X_j)`` pairs.
    """
    n = g.n
    if n < 4:
        raise SampleTooSmallError(f"the U-statistic needs n >= 4, got n = {n}")
    C = _u_center(g.kx)
    D = _u_center(g.gy)
    return float(np.sum(C * D) / (n * (n - 3)))


def row_statistics(g: GramPair) -> np.ndarray:
    """``a_i = 1/n sum_j G_ij K_ij``, the HS inner product of the i-th atom with the mean atom."""
    return np.sum(g.gy * g.kx, axis=1) / g.n


def alpha_hat_sq(g: GramPair) -> float:
    """Empirical variance (divisor ``n``) of :func:`row_statistics`."""
    a = row_statistics(g)
    return float(np.mean((a - a.mean()) ** 2))


def sigma_hat_sq(alpha_sq: float, cert: WeightCertificate) -> float:
    """Null variance estimate ``4 (w^2 - 1) alpha^2``."""
    if not cert.w_squared > 1.0:
        raise InvalidCertificateError(
            f"w_squared must exceed 1 for a non-degenerate limit, got {cert.w_squared!r}"
        )
    if alpha_sq < 0:
        raise UsageError(f"alpha_sq must be nonnegative, got {alpha_sq!r}")
    return 4.0 * (cert.w_squared - 1.0) * alpha_sq


@dataclass(frozen=True)
class EstimateBundle:
    naive: float
    weighted: float
    # None when n < 4
    ustat: Optional[float]
    alpha_sq: float
    sigma_sq: float
    n: int
    gamma: float
    family: str

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_all(g: GramPair, family: Optional[WeightFamily] = None) -> EstimateBundle:
    family = family or WeightFamily()
    cert = certificate(family)
    alpha_sq = alpha_hat_sq(g)
    return EstimateBundle(
        naive=kcmd_naive(g),
        weighted=kcmd_weighted(g, generate(family, g.n)),
        ustat=kcmd_ustat(g) if g.n >= 4 else None,
        alpha_sq=alpha_sq,
        sigma_sq=sigma_hat_sq(alpha_sq, cert),
        n=g.n,
        gamma=family.gamma,
        family=family.kind,
    )
