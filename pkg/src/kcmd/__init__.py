"""Weighted kernel conditional mean dependence (KCMD) estimation and testing.

The test checks ``H0: E(Y | X) = E(Y)`` for ``X`` and ``Y`` with values in
separable Hilbert spaces (vectors or curves on a grid). Its statistic is a
plug-in KCMD estimate with weights in the cross-product term. Studentized,
it has a standard normal limit under the null.
"""

__version__ = "0.1.0"

from .diagnostics import EmpiricalUV, empirical_uv, sigma_gamma_plugin
from .errors import (
    BadScenarioError,
    DataError,
    DegenerateSampleError,
    DegenerateVarianceError,
    GridViolationError,
    InvalidCertificateError,
    KCMDError,
    LengthMismatchError,
    NumericalDegeneracy,
    OutOfRangeError,
    ParseError,
    RowCountMismatchError,
    SampleTooSmallError,
    ShapeMismatchError,
    UnsupportedFamilyError,
    UsageError,
)
from .estimators import (
    EstimateBundle,
    alpha_hat_sq,
    estimate_all,
    kcmd_naive,
    kcmd_ustat,
    kcmd_weighted,
    sigma_hat_sq,
)
from .hilbert import Curve, Grid, Sample, Side, Vector, inner_product, squared_distance
from .inference import TestResult, normal_cdf, normal_quantile, run_test
from .io import RunConfig, load_sample, read_config, read_manifest
from .kernels import (
    Gaussian,
    GramPair,
    Linear,
    eval_kernel,
    gram_pair,
    median_heuristic,
)
from .simulate import MonteCarloReport, Scenario, generate, monte_carlo
from .weights import (
    WeightCertificate,
    WeightFamily,
    certificate,
    verify_conditions,
)
from .weights import generate as generate_weights
