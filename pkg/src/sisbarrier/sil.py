"""Safety integrity level bands and demand-mode selection."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

HOURS_PER_YEAR = 8760.0


class DemandMode(str, enum.Enum):
    LOW_DEMAND = "low_demand"
    HIGH_DEMAND = "high_demand"


class SilLevel(str, enum.Enum):
    SIL4 = "SIL4"
    SIL3 = "SIL3"
    SIL2 = "SIL2"
    SIL1 = "SIL1"
    NONE_BELOW = "none_below"  # worse than SIL 1
    NONE_ABOVE = "none_above"  # better than the SIL 4 band

    @property
    def rank(self) -> int:
        """Ordering for target checks: none_below < SIL1 < ... < SIL4 < none_above."""
        return _RANK[self]

    def meets(self, target: int) -> bool:
        return self.rank >= target


_RANK = {
    SilLevel.NONE_BELOW: 0,
    SilLevel.SIL1: 1,
    SilLevel.SIL2: 2,
    SilLevel.SIL3: 3,
    SilLevel.SIL4: 4,
    SilLevel.NONE_ABOVE: 5,
}

# (lower bound inclusive, level); upper bound is the previous row's lower bound
PFD_BANDS = ((1e-1, SilLevel.NONE_BELOW), (1e-2, SilLevel.SIL1), (1e-3, SilLevel.SIL2),
             (1e-4, SilLevel.SIL3), (1e-5, SilLevel.SIL4))
PFH_BANDS = ((1e-5, SilLevel.NONE_BELOW), (1e-6, SilLevel.SIL1), (1e-7, SilLevel.SIL2),
             (1e-8, SilLevel.SIL3), (1e-9, SilLevel.SIL4))


@dataclass(frozen=True)
class SilVerdict:
    mode: DemandMode
    probability: float
    level: SilLevel


def classify_demand_mode(demand_rate_per_year: float, full_test_period_hours: float) -> DemandMode:
    """Low demand iff demands are at most one per year and at most twice the
    proof-test frequency; high demand otherwise."""
    if not (demand_rate_per_year > 0 and full_test_period_hours > 0):
        raise DomainError("demand rate and full test period must both be positive")
    test_frequency_per_year = HOURS_PER_YEAR / full_test_period_hours
    if demand_rate_per_year <= 1.0 and demand_rate_per_year <= 2.0 * test_frequency_per_year:
        return DemandMode.LOW_DEMAND
    return DemandMode.HIGH_DEMAND


def _band(probability: float, bands) -> SilLevel:
    if not (0.0 <= probability <= 1.0) or math.isnan(probability):
        raise DomainError(f"probability {probability!r} outside [0, 1]")
    for lower, level in bands:
        if probability >= lower:
            return level
    return SilLevel.NONE_ABOVE


def sil_from_pfd(pfd: float) -> SilVerdict:
    return SilVerdict(DemandMode.LOW_DEMAND, pfd, _band(pfd, PFD_BANDS))


def sil_from_pfh(pfh: float) -> SilVerdict:
    return SilVerdict(DemandMode.HIGH_DEMAND, pfh, _band(pfh, PFH_BANDS))


def verdict(mode: DemandMode, probability: float) -> SilVerdict:
    return sil_from_pfd(probability) if mode is DemandMode.LOW_DEMAND else sil_from_pfh(probability)
