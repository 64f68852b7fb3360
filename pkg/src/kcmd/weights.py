"""Weight arrays for the cross-product term of the weighted estimator.

Two families are provided, both indexed from ``i = 1``:

* alternating: ``w_i = 1 + (-1)**i * gamma``
* sinusoidal:  ``w_i = 1 + sin(i * pi * gamma)``

Neither depends on ``n``, so a weight array of length ``n`` is a prefix of
any longer one. The constant-one family exists for tests only: with it the
weighted estimator reduces to the naive one, and it cannot be used for
inference because its mean square is not above 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List

import numpy as np

from .errors import UnsupportedFamilyError, UsageError

FAMILIES = ("alternating", "sinusoidal", "constant")

# Absolute slack for the partial-sum check; covers cumulative roundoff only.
_PARTIAL_SUM_SLACK = 1e-9


@dataclass(frozen=True)
class WeightFamily:
    kind: str = "alternating"
    gamma: float = 0.5

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise UsageError(f"unknown weight family {self.kind!r}; expected one of {FAMILIES}")
        gamma = float(self.gamma)
        if self.kind != "constant" and not (0.0 < gamma < 1.0):
            raise UsageError(f"gamma must lie in the open interval (0, 1), got {self.gamma!r}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def inferential(self) -> bool:
        return self.kind != "constant"

    def to_dict(self) -> dict:
        return {"family": self.kind, "gamma": self.gamma}


@dataclass(frozen=True)
class WeightCertificate:
    """Constants of the three weight conditions.

    ``tau`` bounds ``n * |mean(w) - 1|``, every weight is below
    ``c_bound``, and ``mean(w**2)`` tends to ``w_squared``.
    """

    tau: float
    c_bound: float
    w_squared: float

    def to_dict(self) -> dict:
        return asdict(self)


def generate(family: WeightFamily, n: int) -> np.ndarray:
    """Weights ``w_1, ..., w_n`` as a float array.

    >>> generate(WeightFamily("alternating", 0.5), 4)
    array([0.5, 1.5, 0.5, 1.5])
    """
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    i = np.arange(1, n + 1)
    if family.kind == "alternating":
        return np.where(i % 2 == 0, 1.0 + family.gamma, 1.0 - family.gamma)
    if family.kind == "sinusoidal":
        return 1.0 + np.sin(i * np.pi * family.gamma)
    return np.ones(n)


def _constants(family: WeightFamily) -> WeightCertificate:
    g = family.gamma
    if family.kind == "alternating":
        # |sum_i (-1)**i gamma| <= gamma < 1 for every n
        return WeightCertificate(tau=1.0, c_bound=2.0, w_squared=1.0 + g * g)
    if family.kind == "sinusoidal":
        return WeightCertificate(
            tau=1.0 / abs(math.sin(math.pi * g / 2)), c_bound=2.0, w_squared=1.5
        )
    return WeightCertificate(tau=1.0, c_bound=2.0, w_squared=1.0)


def certificate(family: WeightFamily) -> WeightCertificate:
    if not family.inferential:
        raise UnsupportedFamilyError(
            "the constant-one family has mean square 1 and admits no certificate"
        )
    return _constants(family)


@dataclass
class ConditionReport:
    family: str
    gamma: float
    n_max: int
    tau: float
    c_bound: float
    w_squared: float
    # largest n * |mean(w) - 1| over n = 1..n_max, and where it occurs
    partial_sum_max: float
    partial_sum_argmax: int
    partial_sum_ok: bool
    # largest single weight over i = 1..n_max (1-based position)
    weight_max: float
    weight_argmax: int
    bound_ok: bool
    mean_square: float
    mean_square_gap: float
    mean_square_tol: float
    mean_square_ok: bool
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def verify_conditions(family: WeightFamily, n_max: int, mean_square_tol=None) -> ConditionReport:
    """Check the weight conditions numerically for every ``n <= n_max``.

    * partial sums: ``n * |mean(w_1..w_n) - 1| <= tau`` for all ``n``;
    * boundedness: ``max w_i < c_bound`` (strict);
    * mean square: ``w_squared > 1`` and
      ``|mean(w**2) - w_squared| <= mean_square_tol`` at ``n = n_max``
      (default tolerance ``10 / n_max``).

    Failures are collected in the report rather than raised.
    """
    if n_max < 1:
        raise UsageError(f"n_max must be positive, got {n_max}")
    cert = _constants(family)
    w = generate(family, n_max)

    dev = np.abs(np.cumsum(w - 1.0))
    k = int(np.argmax(dev))
    partial_ok = bool(dev[k] <= cert.tau + _PARTIAL_SUM_SLACK)

    j = int(np.argmax(w))
    bound_ok = bool(w[j] < cert.c_bound)

    mean_sq = float(np.mean(w * w))
    gap = abs(mean_sq - cert.w_squared)
    tol = 10.0 / n_max if mean_square_tol is None else float(mean_square_tol)
    ms_ok = cert.w_squared > 1.0 and gap <= tol

    failures = []
    if not partial_ok:
        failures.append(
            f"partial sums: n*|mean(w)-1| = {float(dev[k])!r} exceeds tau = {cert.tau!r} at n = {k + 1}"
        )
    if not bound_ok:
        failures.append(
            f"boundedness: w_{j + 1} = {float(w[j])!r} is not strictly below C = {cert.c_bound!r}"
        )
    if cert.w_squared <= 1.0:
        failures.append(f"mean square: limit {cert.w_squared!r} is not above 1")
    elif gap > tol:
        failures.append(
            f"mean square: |mean(w^2) - {cert.w_squared!r}| = {gap!r} exceeds {tol!r} at n = {n_max}"
        )

    return ConditionReport(
        family=family.kind,
        gamma=family.gamma,
        n_max=n_max,
        tau=cert.tau,
        c_bound=cert.c_bound,
        w_squared=cert.w_squared,
        partial_sum_max=float(dev[k]),
        partial_sum_argmax=k + 1,
        partial_sum_ok=partial_ok,
        weight_max=float(w[j]),
        weight_argmax=j + 1,
        bound_ok=bound_ok,
        mean_square=mean_sq,
        mean_square_gap=gap,
        mean_square_tol=tol,
        mean_square_ok=ms_ok,
        failures=failures,
    )
