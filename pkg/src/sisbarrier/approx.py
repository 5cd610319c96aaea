"""First-order (small lambda*T1) approximations.

Each result carries a :class:`ValidityReport`; leaving the validity domain
adds a warning instead of raising, so sweeps can cross the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exact
from .errors import DomainError
from .model import BarrierSpec, Evaluation, Method, ValidityReport, binomial, coeff_V

ONE_HOUR = 1.0


def validity(spec: BarrierSpec) -> ValidityReport:
    return ValidityReport(spec.lambda_t1)


def _approximate(value: float, spec: BarrierSpec, extra: tuple[str, ...] = ()) -> Evaluation:
    report = validity(spec)
    warnings = list(extra)
    if report.warning():
        warnings.append(report.warning())
    if value > 1.0:
        warnings.append(f"approximate value {value:.6g} clamped to 1")
        value = 1.0
    return Evaluation(max(0.0, value), Method.APPROXIMATE, tuple(warnings), validity=report)


def _require_basic(spec: BarrierSpec, what: str) -> None:
    if not spec.is_basic:
        raise DomainError(f"{what} is only defined without effective partial tests")


def pfd_instant_approx(spec: BarrierSpec, t: float, *, left: bool = False) -> Evaluation:
    """C(N, M-1) * (lambda*t - E*lambda*p*T0)^(N-M+1), the dominant minimal-cut term."""
    spec.check_time(t)
    order = spec.n - spec.m + 1
    exposure = exact._element_exposure(spec, t, left)
    return _approximate(binomial(spec.n, spec.m - 1) * exposure**order, spec)


def pfd_average_approx(spec: BarrierSpec) -> Evaluation:
    order = spec.n - spec.m + 1
    lead = binomial(spec.n, spec.m - 1) / (order + 1)
    if spec.is_basic:
        value = lead * spec.lambda_t1**order
    else:
        policy = spec.test_policy
        v = coeff_V(spec.m, spec.n, policy.partial_test_count, policy.partial_coverage)
        value = lead * (spec.failure_rate_per_hour * spec.t0) ** order * v
    return _approximate(value, spec)


def barrier_rate_approx(spec: BarrierSpec, t: float) -> float:
    """Approximate barrier failure rate lambda_b(t) [per hour].

    C(N, M) * M * lambda^(N-M+1) * t^(N-M); its integral from 0 to t is the
    approximate PFD(t) since C(N, M) * M / (N-M+1) = C(N, M-1).
    """
    _require_basic(spec, "barrier_rate_approx")
    spec.check_time(t)
    lam = spec.failure_rate_per_hour
    k = spec.n - spec.m
    return binomial(spec.n, spec.m) * spec.m * lam ** (k + 1) * t**k


def pfh_average_approx(spec: BarrierSpec) -> Evaluation:
    _require_basic(spec, "pfh_average_approx")
    lam = spec.failure_rate_per_hour
    k = spec.n - spec.m
    value = binomial(spec.n, spec.m - 1) * lam ** (k + 1) * spec.t1**k * ONE_HOUR
    return _approximate(value, spec)


@dataclass(frozen=True)
class PfhFromPfd:
    """The two PFD-based PFH estimates (dimensionless, rate x 1 h)."""

    from_pfd_at_t1: float
    from_pfd_average: float
    validity: ValidityReport


def pfh_from_pfd_approx(spec: BarrierSpec) -> PfhFromPfd:
    """PFH ~ PFD(T1)/T1 * 1h ~ PFD_avg * (N-M+2)/T1 * 1h, from exact PFD values."""
    _require_basic(spec, "pfh_from_pfd_approx")
    t1 = spec.t1
    at_t1 = exact.pfd_instant(spec, t1)
    avg = exact.pfd_average(spec).value
    return PfhFromPfd(
        from_pfd_at_t1=min(1.0, at_t1 / t1 * ONE_HOUR),
        from_pfd_average=min(1.0, avg * (spec.n - spec.m + 2) / t1 * ONE_HOUR),
        validity=validity(spec),
    )
