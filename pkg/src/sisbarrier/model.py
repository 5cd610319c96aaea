"""Domain types and the time-independent combinatorial sums.

Every evaluator in the package takes a :class:`BarrierSpec`: a MooN voting
architecture, a constant per-element dangerous undetected failure rate and a
proof-test policy (full tests every ``T1`` hours, ``n`` evenly spaced partial
tests per full-test period, each revealing a fraction ``E`` of the failures).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .errors import DomainError

MAX_ELEMENTS = 20


@dataclass(frozen=True)
class Architecture:
    """M-out-of-N voting: the barrier works iff at least ``m_required`` of
    its ``n_elements`` identical elements work."""

    m_required: int
    n_elements: int

    def __post_init__(self) -> None:
        m, n = self.m_required, self.n_elements
        if not (isinstance(m, int) and isinstance(n, int)):
            raise DomainError(f"architecture sizes must be integers, got M={m!r}, N={n!r}")
        if not 1 <= m <= n:
            raise DomainError(f"need 1 <= M <= N, got M={m}, N={n}")
        if n > MAX_ELEMENTS:
            raise DomainError(f"N={n} exceeds the supported maximum of {MAX_ELEMENTS}")

    @property
    def tolerance(self) -> int:
        """Number of element failures the barrier survives (N - M)."""
        return self.n_elements - self.m_required

    def __str__(self) -> str:
        return f"{self.m_required}oo{self.n_elements}"


@dataclass(frozen=True)
class TestPolicy:
    full_test_period_hours: float
    partial_test_count: int = 1
    partial_coverage: float = 0.0

    # keep pytest from collecting this as a test class
    __test__ = False

    def __post_init__(self) -> None:
        t1 = self.full_test_period_hours
        if not (math.isfinite(t1) and t1 > 0):
            raise DomainError(f"full test period must be a positive finite number, got {t1!r}")
        n = self.partial_test_count
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"partial test count must be an integer >= 1, got {n!r}")
        e = self.partial_coverage
        if not 0.0 <= e <= 1.0:
            raise DomainError(f"partial coverage must lie in [0, 1], got {e!r}")

    @property
    def partial_period_hours(self) -> float:
        """T0 = T1 / n, the spacing between consecutive (partial or full) tests."""
        return self.full_test_period_hours / self.partial_test_count

    @property
    def has_partial_tests(self) -> bool:
        return self.partial_test_count > 1 and self.partial_coverage > 0.0

    def partial_test_instants(self) -> list[float]:
        """Interior partial-test instants p*T0 for p = 1..n-1."""
        t0 = self.partial_period_hours
        return [p * t0 for p in range(1, self.partial_test_count)]

    def segment_index(self, t: float, *, left: bool = False) -> int:
        """Number of partial tests already performed at time ``t``.

        Right-continuous by default: at a test instant the post-test segment
        is returned. ``left=True`` gives the pre-test segment. Times at or
        past T1 stay in the last segment (no renewal is applied at T1).
        """
        n = self.partial_test_count
        if n == 1:
            return 0
        ratio = t / self.partial_period_hours
        # snap to test instants against rounding in t = p*T0
        nearest = round(ratio)
        if abs(ratio - nearest) <= 1e-12 * max(1.0, abs(ratio)):
            p = int(nearest) - 1 if left else int(nearest)
        else:
            p = math.floor(ratio)
        return min(max(p, 0), n - 1)


@dataclass(frozen=True)
class BarrierSpec:
    architecture: Architecture
    failure_rate_per_hour: float
    test_policy: TestPolicy

    def __post_init__(self) -> None:
        lam = self.failure_rate_per_hour
        if not (math.isfinite(lam) and lam > 0):
            raise DomainError(f"failure rate must be positive and finite, got {lam!r}")

    @classmethod
    def of(
        cls,
        m: int,
        n_elements: int,
        failure_rate: float,
        t1_hours: float,
        partial_tests: int = 1,
        coverage: float = 0.0,
    ) -> "BarrierSpec":
        """Shorthand constructor from plain numbers."""
        return cls(
            Architecture(m, n_elements),
            failure_rate,
            TestPolicy(t1_hours, partial_tests, coverage),
        )

    @property
    def m(self) -> int:
        return self.architecture.m_required

    @property
    def n(self) -> int:
        return self.architecture.n_elements

    @property
    def t1(self) -> float:
        return self.test_policy.full_test_period_hours

    @property
    def t0(self) -> float:
        return self.test_policy.partial_period_hours

    @property
    def lambda_t1(self) -> float:
        return self.failure_rate_per_hour * self.t1

    @property
    def is_basic(self) -> bool:
        """True when partial tests have no effect (n = 1 or E = 0)."""
        return not self.test_policy.has_partial_tests

    def with_changes(self, **changes) -> "BarrierSpec":
        """Copy with any of m, n_elements, failure_rate, t1_hours,
        partial_tests, coverage replaced."""
        values = dict(
            m=self.m,
            n_elements=self.n,
            failure_rate=self.failure_rate_per_hour,
            t1_hours=self.t1,
            partial_tests=self.test_policy.partial_test_count,
            coverage=self.test_policy.partial_coverage,
        )
        unknown = set(changes) - set(values)
        if unknown:
            raise TypeError(f"unknown fields: {sorted(unknown)}")
        values.update(changes)
        return BarrierSpec.of(**values)

    def check_time(self, t: float) -> None:
        if not (0.0 <= t <= self.t1):
            raise DomainError(f"t={t!r} h lies outside [0, T1={self.t1}]")


class Method(str, enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class ValidityReport:
    """Whether the small lambda*T1 expansion is trustworthy."""

    lambda_t1: float
    threshold: float = 1e-2

    @property
    def within_domain(self) -> bool:
        return self.lambda_t1 < self.threshold

    def warning(self) -> Optional[str]:
        if self.within_domain:
            return None
        return (
            f"lambda*T1 = {self.lambda_t1:.3g} >= {self.threshold:g}: "
            "first-order approximation outside its validity domain"
        )


@dataclass(frozen=True)
class Evaluation:
    value: float
    method: Method
    warnings: tuple[str, ...] = ()
    std_error: Optional[float] = None
    validity: Optional[ValidityReport] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"probability {self.value!r} outside [0, 1]")
        simulated = self.method is Method.SIMULATED
        if simulated != (self.std_error is not None):
            raise DomainError("std_error must be given for simulated results and only for them")
        if self.std_error is not None and self.std_error < 0:
            raise DomainError("std_error must be nonnegative")

    def __float__(self) -> float:
        return self.value


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n <= 20."""
    if not (0 <= k <= n <= MAX_ELEMENTS):
        raise DomainError(f"binomial({n}, {k}) needs 0 <= k <= n <= {MAX_ELEMENTS}")
    return math.comb(n, k)


def coeff_S(m: int, n: int, x: int) -> int:
    """Signed integer weight of exp(-x*lambda*t) in the MooN reliability.

    S(M, N, x) = sum_{k=M}^{x} C(N, x) C(x, k) (-1)^(x-k)
    """
    if not (1 <= m <= x <= n <= MAX_ELEMENTS):
        raise DomainError(f"coeff_S needs 1 <= M <= x <= N <= {MAX_ELEMENTS}, got ({m}, {n}, {x})")
    return binomial(n, x) * sum(binomial(x, k) * (-1) ** (x - k) for k in range(m, x + 1))


def _check_partial_args(n: int, e: float) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"partial test count must be an integer >= 1, got {n!r}")
    if not 0.0 <= e <= 1.0:
        raise DomainError(f"coverage must lie in [0, 1], got {e!r}")


def coeff_T_mp(n: int, e, lam, t0, x: int) -> mpmath.mpf:
    """coeff_T at the current mpmath working precision."""
    e, lam, t0 = mpmath.mpf(e), mpmath.mpf(lam), mpmath.mpf(t0)
    rate = x * (1 - e) * lam * t0
    return mpmath.fsum(mpmath.exp(-rate * p) for p in range(n)) / n


def coeff_T(n: int, e: float, lam: float, t0: float, x: int) -> float:
    """Mean over the n partial-test segments of the residual survival factor
    exp(-x*(1-E)*lambda*p*T0) left by coverage-limited partial tests."""
    _check_partial_args(n, e)
    if lam <= 0 or t0 <= 0 or x < 1:
        raise DomainError("coeff_T needs lambda > 0, T0 > 0 and x >= 1")
    with mpmath.workdps(30):
        return float(coeff_T_mp(n, e, lam, t0, x))


def coeff_V_mp(m: int, n_elements: int, n: int, e) -> mpmath.mpf:
    k = n_elements - m + 2
    one_minus_e = 1 - mpmath.mpf(e)
    terms = ((1 + p * one_minus_e) ** k - (p * one_minus_e) ** k for p in range(n))
    return mpmath.fsum(terms) / n


def coeff_V(m: int, n_elements: int, n: int, e: float) -> float:
    """Growth factor of the approximate average PFD caused by the failures
    that partial tests cannot reveal; equals 1 when they reveal everything."""
    if not (1 <= m <= n_elements <= MAX_ELEMENTS):
        raise DomainError(f"coeff_V needs 1 <= M <= N <= {MAX_ELEMENTS}")
    _check_partial_args(n, e)
    with mpmath.workdps(30):
        return float(coeff_V_mp(m, n_elements, n, e))
