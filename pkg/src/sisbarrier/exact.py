"""Exact evaluators: reliability, instantaneous and average PFD, PFH.

Instantaneous values use the element-level form: with partial tests every
element has unavailability ``q = 1 - exp(-lambda*(t - E*p*T0))`` in segment
``p``, and the barrier is down when fewer than M elements are up. Expanding
that binomial tail in powers of ``exp(-lambda*t)`` gives the signed-sum form
``1 - sum_x S(M,N,x) * exp(x*E*lambda*p*T0) * exp(-x*lambda*t)``; the two
are algebraically identical, but the tail sum never subtracts numbers close
to one, so it keeps full relative precision for PFD values near 1e-15.

Average PFD is the closed form over the S, T sums evaluated in mpmath with
enough digits to absorb the cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import DomainError, SingularityError
from .model import BarrierSpec, Evaluation, Method, binomial, coeff_S, coeff_T_mp
from .quadrature import DEFAULT_TOL, integrate_pieces

ONE_HOUR = 1.0


@dataclass(frozen=True)
class CurvePoint:
    t_hours: float
    value: float
    # True for the pre-test value at the end of an inter-test interval
    left_limit: bool = False


def _element_exposure(spec: BarrierSpec, t: float, left: bool = False) -> float:
    """lambda * (time since each element's detectable failures were last cleared),
    weighted by mode: lambda*t - E*lambda*p*T0."""
    policy = spec.test_policy
    p = policy.segment_index(t, left=left)
    return spec.failure_rate_per_hour * (t - policy.partial_coverage * p * spec.t0)


def _kofn_down(q: float, r: float, m: int, n: int) -> float:
    """P(fewer than m of n independent elements are up), element unavailability q."""
    return math.fsum(binomial(n, k) * r**k * q ** (n - k) for k in range(m))


def _pfd_extended(spec: BarrierSpec, t: float, left: bool = False) -> float:
    # valid for any t >= 0; past T1 the last segment simply continues
    a = _element_exposure(spec, t, left)
    q = -math.expm1(-a)
    r = math.exp(-a)
    return min(1.0, max(0.0, _kofn_down(q, r, spec.m, spec.n)))


def reliability(spec: BarrierSpec, t: float) -> float:
    """R(t): probability that no barrier failure occurred in [0, t]."""
    if not spec.is_basic:
        raise DomainError("reliability is defined for specs without effective partial tests")
    spec.check_time(t)
    lt = spec.failure_rate_per_hour * t
    r = math.exp(-lt)
    q = -math.expm1(-lt)
    n = spec.n
    return math.fsum(binomial(n, k) * r**k * q ** (n - k) for k in range(spec.m, n + 1))


def pfd_instant(spec: BarrierSpec, t: float, *, left: bool = False) -> float:
    """Instantaneous unavailability PFD(t) for 0 <= t <= T1.

    At a partial-test instant the post-test value is returned unless
    ``left=True``. At T1 the value just before the full test is returned.
    """
    spec.check_time(t)
    return _pfd_extended(spec, t, left)


def _working_digits(spec: BarrierSpec) -> int:
    # every factor of 10 the result sits below 1 costs one digit of cancellation
    small = min(spec.failure_rate_per_hour * spec.t0, 1.0)
    order = spec.n - spec.m + 1
    return 30 + int(math.ceil(order * -math.log10(small)))


def pfd_instant_series(spec: BarrierSpec, t: float, *, left: bool = False) -> float:
    """PFD(t) from the signed S-sum, evaluated in extended precision.

    Slower than :func:`pfd_instant`; kept as an independent route to the
    same number.
    """
    spec.check_time(t)
    p = spec.test_policy.segment_index(t, left=left)
    with mpmath.workdps(_working_digits(spec) + 10):
        lam = mpmath.mpf(spec.failure_rate_per_hour)
        shift = mpmath.mpf(spec.test_policy.partial_coverage) * lam * p * mpmath.mpf(spec.t0)
        total = mpmath.fsum(
            coeff_S(spec.m, spec.n, x) * mpmath.exp(x * shift - x * lam * mpmath.mpf(t))
            for x in range(spec.m, spec.n + 1)
        )
        return float(1 - total)


def pfd_average(spec: BarrierSpec) -> Evaluation:
    """Average PFD over [0, T1] in closed form."""
    policy = spec.test_policy
    n_tests = policy.partial_test_count
    with mpmath.workdps(_working_digits(spec)):
        lam = mpmath.mpf(spec.failure_rate_per_hour)
        t0 = mpmath.mpf(spec.t1) / n_tests
        e = mpmath.mpf(policy.partial_coverage)
        terms = []
        for x in range(spec.m, spec.n + 1):
            y = x * lam * t0
            segment_mean = -mpmath.expm1(-y) / y
            terms.append(coeff_S(spec.m, spec.n, x) * coeff_T_mp(n_tests, e, lam, t0, x) * segment_mean)
        value = float(1 - mpmath.fsum(terms))
    return Evaluation(min(1.0, max(0.0, value)), Method.EXACT)


def _test_breakpoints(spec: BarrierSpec) -> list[float]:
    return [0.0, *spec.test_policy.partial_test_instants(), spec.t1]


def pfd_time_average(spec: BarrierSpec, tol: float = DEFAULT_TOL) -> float:
    """Average of :func:`pfd_instant` over [0, T1] by adaptive quadrature.

    Works in units of T1 so ``tol`` bounds the error of the average itself.
    """
    t1 = spec.t1

    def integrand(u: float, lo: float, hi: float) -> float:
        return _pfd_extended(spec, u * t1, left=(u == hi))

    return integrate_pieces(integrand, [b / t1 for b in _test_breakpoints(spec)], tol)


def _pfh_raw(spec: BarrierSpec, t: float, left: bool = False) -> float:
    before = _pfd_extended(spec, t, left)
    if before >= 1.0:
        raise SingularityError(f"barrier is certainly failed at t={t} h; PFH(t) undefined")
    after = _pfd_extended(spec, t + ONE_HOUR, left)
    return (after - before) / (1.0 - before)


def pfh_instant(spec: BarrierSpec, t: float) -> float:
    """Probability that a barrier working at ``t`` fails within the next hour.

    Lookahead windows that run past T1 see no renewal; windows straddling a
    partial test can give a negative raw value, which is clamped to 0.
    """
    spec.check_time(t)
    return min(1.0, max(0.0, _pfh_raw(spec, t)))


def pfh_breakpoints(spec: BarrierSpec) -> list[float]:
    """Points where the one-hour conditional unreliability may jump or kink."""
    t1 = spec.t1
    points = {0.0, t1}
    for instant in spec.test_policy.partial_test_instants():
        points.add(instant)
        if instant - ONE_HOUR > 0:
            points.add(instant - ONE_HOUR)
    if t1 - ONE_HOUR > 0:
        points.add(t1 - ONE_HOUR)
    return sorted(points)


def pfh_average(spec: BarrierSpec, tol: float = DEFAULT_TOL) -> Evaluation:
    """Time average of the one-hour conditional unreliability over [0, T1]."""
    t1 = spec.t1
    clamped = 0

    def integrand(u: float, lo: float, hi: float) -> float:
        nonlocal clamped
        raw = _pfh_raw(spec, u * t1, left=(u == hi))
        if raw < 0.0:
            clamped += 1
            return 0.0
        return min(1.0, raw)

    value = integrate_pieces(integrand, [b / t1 for b in pfh_breakpoints(spec)], tol)
    warnings = []
    if clamped:
        warnings.append(
            f"{clamped} integrand samples clamped to 0 "
            "(one-hour windows straddling a partial test)"
        )
    return Evaluation(min(1.0, max(0.0, value)), Method.EXACT, tuple(warnings))


def pfd_curve(spec: BarrierSpec, samples_per_period: int) -> list[CurvePoint]:
    """Sample PFD(t) on a uniform grid inside every inter-test interval.

    At each partial-test instant both the pre-test and the post-test values
    are emitted, in that order, so the sawtooth renders with vertical drops.
    """
    if samples_per_period < 2:
        raise DomainError("samples_per_period must be at least 2")
    policy = spec.test_policy
    t0 = spec.t0
    jumps = policy.has_partial_tests
    points: list[CurvePoint] = []
    for p in range(policy.partial_test_count):
        lo = p * t0
        hi = spec.t1 if p == policy.partial_test_count - 1 else (p + 1) * t0
        for j in range(samples_per_period):
            if j == 0 and p > 0 and not jumps:
                continue
            t = lo + (hi - lo) * j / (samples_per_period - 1) if j < samples_per_period - 1 else hi
            left = j == samples_per_period - 1
            points.append(CurvePoint(t, pfd_instant(spec, t, left=left), left))
    return points
