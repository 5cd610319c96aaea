import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sisbarrier import DemandMode, DomainError, SilLevel, classify_demand_mode, sil_from_pfd, sil_from_pfh
from sisbarrier.sil import verdict

PER_DECADE = 50
LEVEL_BY_RANK = {
    0: SilLevel.NONE_BELOW,
    1: SilLevel.SIL1,
    2: SilLevel.SIL2,
    3: SilLevel.SIL3,
    4: SilLevel.SIL4,
    5: SilLevel.NONE_ABOVE,
}


def log_grid():
    """(j, p) with p = 10^(-j/50) on [1e-10, 1]; decade boundaries use exact literals."""
    for j in range(10 * PER_DECADE + 1):
        if j % PER_DECADE == 0:
            yield j, float(f"1e-{j // PER_DECADE}")
        else:
            yield j, 10.0 ** (-j / PER_DECADE)


def expected_level(j: int, top_exponent: int) -> SilLevel:
    """Integer-only band lookup: p lies in [10^-d, 10^-(d-1)) with d = ceil(j/50)."""
    d = -(-j // PER_DECADE)
    # SIL1 starts one decade below the top band
    rank = min(max(d - top_exponent, 0), 5)
    return LEVEL_BY_RANK[rank]


def test_examples():
    assert sil_from_pfd(5.138e-5).level is SilLevel.SIL4
    assert sil_from_pfd(1e-4).level is SilLevel.SIL3
    assert sil_from_pfd(0.5).level is SilLevel.NONE_BELOW
    assert sil_from_pfh(2.16e-7).level is SilLevel.SIL2
    assert sil_from_pfh(1e-8).level is SilLevel.SIL3
    assert sil_from_pfh(1e-10).level is SilLevel.NONE_ABOVE
    assert sil_from_pfd(0.0).level is SilLevel.NONE_ABOVE
    assert sil_from_pfd(1.0).level is SilLevel.NONE_BELOW


@pytest.mark.parametrize(
    "p, level",
    [(1e-1, SilLevel.NONE_BELOW), (1e-2, SilLevel.SIL1), (1e-3, SilLevel.SIL2),
     (1e-4, SilLevel.SIL3), (1e-5, SilLevel.SIL4)],
)
def test_pfd_lower_bounds_inclusive(p, level):
    assert sil_from_pfd(p).level is level
    assert sil_from_pfd(math.nextafter(p, 0.0)).level.rank == level.rank + 1


@pytest.mark.parametrize(
    "p, level",
    [(1e-5, SilLevel.NONE_BELOW), (1e-6, SilLevel.SIL1), (1e-7, SilLevel.SIL2),
     (1e-8, SilLevel.SIL3), (1e-9, SilLevel.SIL4)],
)
def test_pfh_lower_bounds_inclusive(p, level):
    assert sil_from_pfh(p).level is level
    assert sil_from_pfh(math.nextafter(p, 0.0)).level.rank == level.rank + 1


def test_log_grid_scan():
    for j, p in log_grid():
        assert sil_from_pfd(p).level is expected_level(j, 1), p
        assert sil_from_pfh(p).level is expected_level(j, 5), p


@given(st.floats(0, 1), st.floats(0, 1))
def test_classification_is_monotone(a, b):
    lo, hi = sorted((a, b))
    assert sil_from_pfd(lo).level.rank >= sil_from_pfd(hi).level.rank
    assert sil_from_pfh(lo).level.rank >= sil_from_pfh(hi).level.rank


@pytest.mark.parametrize("p", [-1e-12, 1.0000001, math.nan, math.inf])
def test_rejects_non_probabilities(p):
    with pytest.raises(DomainError):
        sil_from_pfd(p)
    with pytest.raises(DomainError):
        sil_from_pfh(p)


def test_meets_target():
    assert SilLevel.SIL3.meets(2)
    assert not SilLevel.SIL1.meets(2)
    assert SilLevel.NONE_ABOVE.meets(4)
    assert not SilLevel.NONE_BELOW.meets(1)


def test_demand_mode_examples():
    assert classify_demand_mode(0.5, 4380.0) is DemandMode.LOW_DEMAND
    assert classify_demand_mode(10.0, 4380.0) is DemandMode.HIGH_DEMAND
    # once per year is fine, but not with a ten-year proof-test period
    assert classify_demand_mode(1.0, 720.0) is DemandMode.LOW_DEMAND
    assert classify_demand_mode(0.9, 87600.0) is DemandMode.HIGH_DEMAND
    assert classify_demand_mode(0.2, 87600.0) is DemandMode.LOW_DEMAND
    with pytest.raises(DomainError):
        classify_demand_mode(0.0, 720.0)


def test_verdict_dispatches_on_mode():
    assert verdict(DemandMode.LOW_DEMAND, 2e-5).level is SilLevel.SIL4
    assert verdict(DemandMode.HIGH_DEMAND, 2e-5).level is SilLevel.NONE_BELOW
