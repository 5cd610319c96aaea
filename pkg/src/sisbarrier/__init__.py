"""Failure probabilities of MooN safety barriers under full and partial proof testing."""

from .approx import (
    barrier_rate_approx,
    pfd_average_approx,
    pfd_instant_approx,
    pfh_average_approx,
    pfh_from_pfd_approx,
)
from .errors import BarrierError, DomainError, OracleError, QuadratureError, SingularityError
from .exact import (
    CurvePoint,
    pfd_average,
    pfd_curve,
    pfd_instant,
    pfd_instant_series,
    pfd_time_average,
    pfh_average,
    pfh_instant,
    reliability,
)
from .model import (
    Architecture,
    BarrierSpec,
    Evaluation,
    Method,
    TestPolicy,
    ValidityReport,
    binomial,
    coeff_S,
    coeff_T,
    coeff_V,
)
from .oracle import Estimate, SimulationConfig, estimate_pfd, estimate_pfh
from .sil import DemandMode, SilLevel, SilVerdict, classify_demand_mode, sil_from_pfd, sil_from_pfh

__version__ = "0.1.0"
