"""Seeded data generators and a Monte Carlo driver for size and power studies.

Every replicate draws from its own generator
``default_rng(SeedSequence(seed, spawn_key=(r,)))``. That makes replicate
``r`` a pure function of ``(seed, r)``, whatever the number of worker
threads or the order in which they finish.

Scenarios
---------
``h0_vectors``
    ``X ~ N(0, I_dx)`` independent of ``Y = m * 1 + s * eps``.
``h0_curves``
    ``X`` and ``Y`` independent random cosine series on uniform grids of
    sizes ``r`` and ``q``; ``Y`` is shifted by the constant ``m``.
``h1_linear``
    ``Y = m * 1 + b * T(X) * v + s * eps`` with ``T(X) = <X, 1>/sqrt(dx)``
    (vectors) or ``T(X) = int X`` (curves).
``h1_nonlinear``
    As ``h1_linear`` with ``T(X) = (||X||^2 - dx) / sqrt(2 dx)`` (vectors)
    or ``T(X) = ((int X)^2 - 1) / sqrt(2)`` (curves).

The signal direction ``v`` has norm 2 and is orthogonal to the constant
mean. The mean offset keeps ``E[Y]`` away from zero; when ``E[Y] = 0`` the
null variance of the weighted estimator vanishes and the normal limit
degenerates.

For ``b = 0`` the H1 generators consume random numbers exactly as the H0
generator of the same data type, so they return the same sample.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .diagnostics import empirical_uv, sigma_gamma_plugin
from .errors import BadScenarioError, NumericalDegeneracy
from .estimators import kcmd_ustat
from .hilbert import Grid, Sample, Side
from .inference import normal_cdf, test_from_gram
from .kernels import gram_pair, resolve_kernel
from .weights import WeightFamily, certificate

KINDS = ("h0_vectors", "h0_curves", "h1_linear", "h1_nonlinear")

# a run fails when more than this fraction of replicates is degenerate
MAX_DEGENERATE_FRACTION = 0.01


@dataclass(frozen=True)
class Scenario:
    kind: str = "h0_vectors"
    n: int = 100
    seed: int = 0
    data: str = "vector"
    dx: int = 3
    dy: int = 3
    r: int = 51
    q: int = 51
    roughness: float = 2.0
    terms: int = 10
    b: float = 0.0
    mean_offset: float = 2.0
    noise: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadScenarioError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "h0_vectors" and self.data != "vector":
            raise BadScenarioError("h0_vectors generates vector data")
        if self.kind == "h0_curves" and self.data != "curve":
            object.__setattr__(self, "data", "curve")
        if self.data not in ("vector", "curve"):
            raise BadScenarioError(f"data must be 'vector' or 'curve', got {self.data!r}")
        for name in ("n", "dx", "dy", "terms"):
            if int(getattr(self, name)) < 1:
                raise BadScenarioError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.n < 4:
            raise BadScenarioError(f"n must be at least 4, got {self.n}")
        if self.r < 2 or self.q < 2:
            raise BadScenarioError("curve grids need at least two points")
        if self.noise < 0 or self.roughness <= 0:
            raise BadScenarioError("noise must be nonnegative and roughness positive")
        if not self.kind.startswith("h1") and self.b != 0:
            raise BadScenarioError("signal strength b only applies to H1 scenarios")

    @property
    def null(self) -> bool:
        return self.kind.startswith("h0")

    def to_dict(self) -> dict:
        return asdict(self)


def _vector_sample(sc: Scenario, rng: np.random.Generator) -> Sample:
    x = rng.standard_normal((sc.n, sc.dx))
    eps = rng.standard_normal((sc.n, sc.dy))
    y = sc.mean_offset + sc.noise * eps
    if sc.kind.startswith("h1"):
        if sc.kind == "h1_linear":
            t = x.sum(axis=1) / math.sqrt(sc.dx)
        else:
            t = (np.sum(x * x, axis=1) - sc.dx) / math.sqrt(2 * sc.dx)
        v = np.zeros(sc.dy)
        if sc.dy >= 2:
            v[0], v[1] = math.sqrt(2), -math.sqrt(2)
        else:
            v[0] = 2.0
        y = y + sc.b * t[:, None] * v[None, :]
    return Sample(Side(x), Side(y))


def _cosine_series(coef: np.ndarray, grid: Grid, roughness: float) -> np.ndarray:
    # coef[:, 0] multiplies the constant; coef[:, k] the k-th cosine, damped by k**-roughness
    k = np.arange(1, coef.shape[1])
    basis = math.sqrt(2) * np.cos(np.pi * k[:, None] * grid.points[None, :])
    return coef[:, :1] + (coef[:, 1:] * k ** (-roughness)) @ basis


def _curve_sample(sc: Scenario, rng: np.random.Generator) -> Sample:
    tg, sg = Grid.uniform(sc.r), Grid.uniform(sc.q)
    cx = rng.standard_normal((sc.n, sc.terms + 1))
    cy = rng.standard_normal((sc.n, sc.terms + 1))
    x = _cosine_series(cx, tg, sc.roughness)
    y = sc.mean_offset + sc.noise * _cosine_series(cy, sg, sc.roughness)
    if sc.kind.startswith("h1"):
        integral = np.sum(x * tg.trapezoid_weights(), axis=1)
        if sc.kind == "h1_linear":
            t = integral
        else:
            t = (integral * integral - 1.0) / math.sqrt(2)
        phi = 2.0 * math.sqrt(2) * np.cos(np.pi * sg.points)
        y = y + sc.b * t[:, None] * phi[None, :]
    return Sample(Side(x, tg), Side(y, sg))


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def generate(scenario: Scenario, rng: Optional[np.random.Generator] = None) -> Sample:
    """Draw one sample; without ``rng`` the scenario seed is used directly."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(scenario.seed))
    if scenario.data == "curve":
        return _curve_sample(scenario, rng)
    return _vector_sample(scenario, rng)


def ks_distance_normal(z) -> float:
    """Kolmogorov-Smirnov distance between the empirical law of ``z`` and N(0, 1)."""
    z = np.sort(np.asarray(z, dtype=np.float64))
    m = z.size
    if m == 0:
        return float("nan")
    F = np.array([normal_cdf(v) for v in z])
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))


@dataclass
class ReplicateRecord:
    index: int
    statistic: Optional[float]
    reject: bool
    kcmd_weighted: Optional[float]
    sigma_hat_sq: Optional[float]
    ustat: Optional[float]
    sigma_plugin: Optional[float]
    degenerate: bool


def _summary(values) -> Optional[dict]:
    if len(values) == 0:
        return None
    v = np.asarray(values)
    return {
        "mean": float(v.mean()),
        "median": float(np.median(v)),
        "min": float(v.min()),
        "max": float(v.max()),
    }


@dataclass
class MonteCarloReport:
    scenario: dict
    replicates: int
    kernel: object
    family: str
    gamma: float
    alpha: float
    rejections: int
    rejection_rate: float
    n_degenerate: int
    degenerate_fraction: float
    ok: bool
    statistics: List[float]
    ks_distance: Optional[float]
    statistic_mean: Optional[float]
    statistic_sd: Optional[float]
    mean_ustat: Optional[float]
    ustat_se: Optional[float]
    sigma_hat_sq_summary: Optional[dict]
    sigma_plugin_summary: Optional[dict]
    records: List[ReplicateRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["records"]
        return d

    def write_csv(self, path) -> None:
        names = [f.name for f in ReplicateRecord.__dataclass_fields__.values()]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(names)
            for rec in self.records:
                writer.writerow(["" if getattr(rec, k) is None else repr(getattr(rec, k)) for k in names])


def _one_replicate(scenario, index, kernel, family, cert, alpha) -> ReplicateRecord:
    sample = generate(scenario, replicate_rng(scenario.seed, index))
    try:
        spec = resolve_kernel(kernel, sample)
    except NumericalDegeneracy:
        return ReplicateRecord(index, None, False, None, None, None, None, True)
    g = gram_pair(spec, sample)
    ustat = kcmd_ustat(g)
    plugin = sigma_gamma_plugin(empirical_uv(g), cert)
    try:
        res = test_from_gram(g, family, alpha)
    except NumericalDegeneracy:
        return ReplicateRecord(index, None, False, None, None, ustat, plugin, True)
    return ReplicateRecord(
        index, res.statistic, res.reject, res.kcmd_weighted, res.sigma_hat**2, ustat, plugin, False
    )


def monte_carlo(
    scenario: Scenario,
    replicates: int,
    kernel="median",
    family: Optional[WeightFamily] = None,
    alpha: float = 0.05,
    threads: int = 1,
) -> MonteCarloReport:
    """Run the test on ``replicates`` independent samples and summarise.

    Degenerate replicates (zero null variance, or coincident X for the
    median bandwidth) count as non-rejections, are left out of the
    normality diagnostics, and mark the report ``ok = False`` when they
    exceed 1% of the run.
    """
    if replicates < 1:
        raise BadScenarioError(f"replicates must be positive, got {replicates}")
    family = family or WeightFamily()
    cert = certificate(family)

    def task(i):
        return _one_replicate(scenario, i, kernel, family, cert, alpha)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(task, range(replicates)))
    else:
        records = [task(i) for i in range(replicates)]

    valid = [r for r in records if not r.degenerate]
    stats = [r.statistic for r in valid]
    rejections = sum(r.reject for r in records)
    n_deg = replicates - len(valid)
    ustats = np.array([r.ustat for r in records if r.ustat is not None])
    z = np.array(stats)

    if isinstance(kernel, str) or kernel is None:
        kernel_echo = "median"
    else:
        kernel_echo = kernel.to_dict()

    return MonteCarloReport(
        scenario=scenario.to_dict(),
        replicates=replicates,
        kernel=kernel_echo,
        family=family.kind,
        gamma=family.gamma,
        alpha=alpha,
        rejections=rejections,
        rejection_rate=rejections / replicates,
        n_degenerate=n_deg,
        degenerate_fraction=n_deg / replicates,
        ok=n_deg <= MAX_DEGENERATE_FRACTION * replicates,
        statistics=stats,
        ks_distance=ks_distance_normal(z) if z.size else None,
        statistic_mean=float(z.mean()) if z.size else None,
        statistic_sd=float(z.std()) if z.size else None,
        mean_ustat=float(ustats.mean()) if ustats.size else None,
        ustat_se=float(ustats.std(ddof=1) / math.sqrt(ustats.size)) if ustats.size > 1 else None,
        sigma_hat_sq_summary=_summary([r.sigma_hat_sq for r in valid]),
        sigma_plugin_summary=_summary([r.sigma_plugin for r in records if r.sigma_plugin is not None]),
        records=records,
    )
