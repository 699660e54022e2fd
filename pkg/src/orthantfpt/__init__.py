"""Multivariate normal orthant probabilities via first passage times of Gaussian series."""

from .bounds import SlepianBound, bound_curve, exchangeable_orthant, slepian_bound
from .covariance import (
    CirculantSpectrum,
    CovarianceSequence,
    arfima_covariance,
    cholesky,
    circulant_spectrum,
    load_tabulated_covariance,
    read_covariance_file,
    toeplitz_matrix,
)
from .errors import (
    DegenerateCorrelation,
    FormatError,
    NotNonNegativeDefinite,
    NotPositiveDefinite,
    NumericalError,
    ParameterError,
    ShapeError,
)
from .fpt import (
    Boundary,
    OrthantProblem,
    SurvivalCurve,
    estimate_orthant_fpt,
    fairness_bound_check,
    first_crossing,
)
from .mvn_ref import GenzResult, GhkResult, genz_estimate, ghk_estimate
from .num_core import RandomStream
from .path_sim import PathBatch, make_plan, sample_davies_harte, sample_durbin_levinson, sample_paths

__version__ = "0.1.0"
