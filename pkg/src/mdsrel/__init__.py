"""Reliability of MDS-parity protected multidimensional storage arrays.

Closed-form hazard, survival, MTTF and AFR figures for coded component
arrays under constant, Weibull, bathtub, or tabulated component hazards,
validated by a seeded Monte Carlo failure-time simulator.
"""

from ._backend import backend_name
from .config import RunConfig, load_config, parse_config
from .curves import Curve
from .errors import (CapacityError, ConfigError, EmptyCurveError,
                     NonConvergenceError, NumericError, SingularityError,
                     SurvivalUnderflowError)
from .hazards import (YEAR_HOURS, CompositeBathtub, ConstantHazard,
                      HazardModel, TabulatedHazard, WeibullHazard, afr, mttf)
from .mdscore import (ArrayConfig, CodedBlockHazard, MdsCode,
                      adaptive_limit_constant, array_component_hazard,
                      array_hazard, asymptotic_component_hazard,
                      block_survival, component_hazard,
                      component_hazard_lower_bound, parity_component_hazard,
                      reliability_crossing_time, replication_component_hazard,
                      system_failure_density, system_survival,
                      weighted_failure_cdf)
from .simulate import (SimConfig, SimOutcome, TrialStream, empirical_hazard,
                       run_simulation, simulate_system_ttf)
from .specialmath import (hamming_ball_volume, log_binomial, q_ary_entropy,
                          regularized_upper_gamma)

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig", "CapacityError", "CodedBlockHazard", "CompositeBathtub",
    "ConfigError", "ConstantHazard", "Curve", "EmptyCurveError",
    "HazardModel", "MdsCode", "NonConvergenceError", "NumericError",
    "RunConfig", "SimConfig", "SimOutcome", "SingularityError",
    "SurvivalUnderflowError", "TabulatedHazard", "TrialStream",
    "WeibullHazard", "YEAR_HOURS", "adaptive_limit_constant", "afr",
    "array_component_hazard", "array_hazard", "asymptotic_component_hazard",
    "backend_name", "block_survival", "component_hazard",
    "component_hazard_lower_bound", "empirical_hazard",
    "hamming_ball_volume", "load_config", "log_binomial", "mttf",
    "parse_config", "parity_component_hazard", "q_ary_entropy",
    "regularized_upper_gamma", "reliability_crossing_time",
    "replication_component_hazard", "run_simulation",
    "simulate_system_ttf", "system_failure_density", "system_survival",
    "weighted_failure_cdf",
]
