"""Plug-in versions of the influence functions behind the limiting variance.

With atoms ``phi_i = Y_i (x) K(X_i, .)`` and the plug-in quantities

    eta = mean_j phi_j,   mu = Ybar,   m = mean_j K(X_j, .),   nu = mu (x) m,

the two per-observation functions are

    U_i = <phi_i - eta, eta> + <Y_i (x) m + mu (x) K(X_i, .) - 2 nu, nu - eta>
    V_i = <phi_i - eta, nu>

and the asymptotic variance of ``sqrt(n) * (weighted estimate - KCMD)`` is
``4 Var(U) + 4 w^2 Var(V) - 8 Cov(U, V)``.

Operators are never formed. Every HS product is expanded with
``<y (x) f, y' (x) f'> = <y, y'> <f, f'>`` and the reproducing property, which
turns it into sums over the Gram matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SampleTooSmallError
from .kernels import GramPair


@dataclass(frozen=True, eq=False)
class EmpiricalUV:
    u: np.ndarray
    v: np.ndarray

    @property
    def n(self) -> int:
        return self.u.size


def empirical_uv(g: GramPair) -> EmpiricalUV:
    n = g.n
    if n < 2:
        raise SampleTooSmallError(f"plug-in U/V need n >= 2, got n = {n}")
    K, G = g.kx, g.gy
    rK = K.sum(axis=1)
    rG = G.sum(axis=1)
    sK = rK.sum()
    sG = rG.sum()

    phi_eta = np.sum(G * K, axis=1) / n
    phi_nu = rG * rK / n**2
    eta_eta = phi_eta.sum() / n
    eta_nu = phi_nu.sum() / n
    nu_nu = (sG / n**2) * (sK / n**2)

    # <Y_i (x) m, eta>, <Y_i (x) m, nu>
    ym_eta = np.sum(G * rK[None, :], axis=1) / n**2
    ym_nu = (rG / n) * (sK / n**2)
    # <mu (x) K(X_i, .), eta>, <mu (x) K(X_i, .), nu>
    mk_eta = np.sum(K * rG[None, :], axis=1) / n**2
    mk_nu = (sG / n**2) * (rK / n)

    u = (phi_eta - eta_eta) + (ym_nu - ym_eta) + (mk_nu - mk_eta) - 2.0 * (nu_nu - eta_nu)
    v = phi_nu - eta_nu
    return EmpiricalUV(u, v)


def sigma_gamma_plugin(uv: EmpiricalUV, cert) -> float:
    """Plug-in limiting variance; moments use divisor ``n``.

    ``cert`` only needs a ``w_squared`` attribute, so a hand-built
    certificate with ``w_squared = 1`` may be passed to probe the
    degenerate limit.
    """
    if uv.n < 2:
        raise SampleTooSmallError(f"need n >= 2, got n = {uv.n}")
    du = uv.u - uv.u.mean()
    dv = uv.v - uv.v.mean()
    var_u = np.mean(du * du)
    var_v = np.mean(dv * dv)
    cov = np.mean(du * dv)
    return float(4.0 * var_u + 4.0 * cert.w_squared * var_v - 8.0 * cov)
