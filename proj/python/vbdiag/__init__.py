"""Python bindings for the vbdiag simulator core."""
from ._core import (  # noqa: F401
    CalibrationError,
    DomainError,
    GeometryError,
    Gm1Params,
    Gm1Process,
    InputError,
    ParameterError,
    ParseError,
    campaign_summary,
    classify_hazard,
    ewma_update,
    fault_bias,
    gm1_discrete_coeffs,
    iono_sigma,
    line_of_sight,
    run_monte_carlo,
    skyplot,
    solution_matrix,
    threshold_factor,
    tropo_sigma,
    validate_scenario,
)

__version__ = "0.1.0"
