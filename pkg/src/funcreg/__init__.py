"""Function-on-function linear regression via canonical and
principal-component expansions, with a population-level verification engine
for the underlying decomposition identities."""

from .core import (
    BandwidthTooSmallError,
    DimensionMismatchError,
    FuncregError,
    FunctionalSample,
    Grid,
    InvalidCovarianceError,
    InvalidGridError,
    ModelSpecificationError,
    RankDeficiencyError,
    SampledCurve,
    SingularCovarianceError,
    Surface,
    TruncationTooLargeError,
    inner_product,
    integrate,
    quadrature_weights,
)
from .smoothing import smooth_curve, smooth_surface
from .fpca import (
    EigenSystem,
    ScoreMatrix,
    center,
    compute_scores,
    cross_sectional_mean,
    eigendecompose,
    estimate_cov_surface,
    estimate_cross_cov_surface,
    estimate_mean,
    fit_eigensystem,
)
from .cca import (
    CanonicalSystem,
    cca_from_covariances,
    functional_cca,
    lift_weights,
    multivariate_cca,
)
from .regression import (
    CanonicalRegression,
    PrincipalComponentRegression,
    RegressionSurface,
    beta_from_canonical,
    fcr_fit,
    fpr_fit,
    predict,
    predict_sample,
    prediction_error,
)
from .selection import CvCell, CvReport, TuningGrid, loocv
from .population import (
    ConditionReport,
    PopulationCanonical,
    PopulationModel,
    SeriesRule,
    check_conditions,
    convergent_cross_series,
    divergent_cross_series,
    fitted_pair_model,
    fourier_basis,
    normal_equation_beta,
    orthonormal_basis,
    pop_beta_star,
    pop_canonical,
    pop_covariances,
    random_model,
    simulate,
    standard_rank2_model,
    verify_cross_cov_decomposition,
    verify_fitted_correlations,
    verify_operator_ordering,
    verify_truncation_identity,
)
from .io import load_sample, load_surface, save_sample, save_surface

__version__ = "0.1.0"
