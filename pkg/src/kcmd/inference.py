"""One-sided test of conditional mean independence.

The studentized statistic ``sqrt(n) * K_w / sigma_hat`` is asymptotically
standard normal under the null, so the null is rejected when it exceeds
the ``1 - alpha`` normal quantile. A negative weighted estimate gives a
negative statistic and is never rejected.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import Optional

from .errors import DegenerateVarianceError, OutOfRangeError, SampleTooSmallError, UsageError
from .estimators import alpha_hat_sq, kcmd_weighted, sigma_hat_sq
from .hilbert import Sample
from .kernels import GramPair, gram_pair, resolve_kernel
from .weights import WeightFamily, certificate, generate

_STD_NORMAL = NormalDist()

# sigma^2 at or below either floor is treated as zero
VARIANCE_ABS_FLOOR = 1e-300
VARIANCE_REL_FLOOR = 1e-14


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_sf(z: float) -> float:
    """Upper tail ``1 - Phi(z)`` without cancellation for large ``z``."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    if not (0.0 < p < 1.0):
        raise OutOfRangeError(f"quantile level must lie in (0, 1), got {p!r}")
    return _STD_NORMAL.inv_cdf(p)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    kcmd_weighted: float
    sigma_hat: float
    p_value: float
    alpha: float
    reject: bool
    n: int
    gamma: float
    family: str
    kernel: dict

    __test__ = False  # not a pytest test class

    def to_dict(self) -> dict:
        return asdict(self)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise UsageError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def decide(statistic: float, alpha: float) -> tuple:
    """``(p_value, reject)`` for an already computed statistic.

    Rejection is the strict inequality ``statistic > Phi^{-1}(1 - alpha)``.
    """
    alpha = _check_alpha(alpha)
    return normal_sf(statistic), bool(statistic > normal_quantile(1.0 - alpha))


def test_from_gram(
    g: GramPair,
    family: Optional[WeightFamily] = None,
    alpha: float = 0.05,
    kernel_echo: Optional[dict] = None,
) -> TestResult:
    family = family or WeightFamily()
    alpha = _check_alpha(alpha)
    n = g.n
    if n < 4:
        raise SampleTooSmallError(f"the test needs n >= 4, got n = {n}")
    cert = certificate(family)
    k_w = kcmd_weighted(g, generate(family, n))
    s2 = sigma_hat_sq(alpha_hat_sq(g), cert)
    if s2 <= VARIANCE_ABS_FLOOR or s2 <= VARIANCE_REL_FLOOR * (1.0 + k_w * k_w):
        raise DegenerateVarianceError(
            f"estimated null variance {s2!r} is numerically zero (weighted estimate {k_w!r})"
        )
    sigma = math.sqrt(s2)
    stat = math.sqrt(n) * k_w / sigma
    p, reject = decide(stat, alpha)
    return TestResult(
        statistic=stat,
        kcmd_weighted=k_w,
        sigma_hat=sigma,
        p_value=p,
        alpha=alpha,
        reject=reject,
        n=n,
        gamma=family.gamma,
        family=family.kind,
        kernel=dict(kernel_echo or {}),
    )


test_from_gram.__test__ = False


def run_test(
    sample: Sample,
    kernel="median",
    family: Optional[WeightFamily] = None,
    alpha: float = 0.05,
) -> TestResult:
    """Gram matrices, weights, weighted estimate and null variance, then the decision.

    ``kernel`` is a kernel spec or ``"median"`` for a Gaussian kernel with
    median-heuristic bandwidth.
    """
    if sample.n < 4:
        raise SampleTooSmallError(f"the test needs n >= 4, got n = {sample.n}")
    spec = resolve_kernel(kernel, sample)
    echo = spec.to_dict()
    if kernel is None or kernel == "median":
        echo["bandwidth"] = "median"
    return test_from_gram(gram_pair(spec, sample), family, alpha, echo)
