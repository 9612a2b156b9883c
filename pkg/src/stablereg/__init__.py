"""Symmetric stable parameter estimation via ECF regression."""
from .design import (
    DesignMoments,
    IntervalDesign,
    build_log_design,
    build_poly_design,
    central_power_moment,
    log_moment,
    power_moment,
    quadrature_oracle,
)
from .ecf import (
    Sample,
    TGrid,
    ZProfile,
    ecf_modulus_sq,
    z_on_grid,
    z_profile,
    z_transform,
)
from .estimators import (
    Estimate,
    YMoments,
    fit_infinite_ls,
    fit_kogon_williams,
    fit_koutrouvelis,
    fit_poly_infinite_ls,
    y_moments,
)
from .model import (
    DegenerateSampleError,
    EstimationError,
    RegressionLine,
    StableParams,
    cf_modulus_sq,
    exact_y,
    recover_sigma,
)
from .rng import StableSampler, replicate_seed
from .simulation import (
    ConfigError,
    SimConfig,
    SimReport,
    SimRow,
    emit_report,
    k_sweep,
    parse_csv,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [
    "DesignMoments",
    "IntervalDesign",
    "build_log_design",
    "build_poly_design",
    "central_power_moment",
    "log_moment",
    "power_moment",
    "quadrature_oracle",
    "Sample",
    "TGrid",
    "ZProfile",
    "ecf_modulus_sq",
    "z_on_grid",
    "z_profile",
    "z_transform",
    "Estimate",
    "YMoments",
    "fit_infinite_ls",
    "fit_kogon_williams",
    "fit_koutrouvelis",
    "fit_poly_infinite_ls",
    "y_moments",
    "DegenerateSampleError",
    "EstimationError",
    "RegressionLine",
    "StableParams",
    "cf_modulus_sq",
    "exact_y",
    "recover_sigma",
    "StableSampler",
    "replicate_seed",
    "ConfigError",
    "SimConfig",
    "SimReport",
    "SimRow",
    "emit_report",
    "k_sweep",
    "parse_csv",
    "run_simulation",
    "__version__",
]
