import math

import pytest

from sisbarrier.errors import QuadratureError
from sisbarrier.quadrature import adaptive_simpson, integrate_pieces


def test_cubic_is_exact():
    assert adaptive_simpson(lambda x: x**3 - 2 * x, 0.0, 2.0) == pytest.approx(0.0, abs=1e-14)


def test_exponential():
    value = adaptive_simpson(math.exp, 0.0, 1.0, tol=1e-12)
    assert value == pytest.approx(math.e - 1.0, abs=1e-12)


def test_oscillatory():
    value = adaptive_simpson(lambda x: math.sin(20 * x), 0.0, math.pi / 2, tol=1e-12)
    assert value == pytest.approx((1 - math.cos(10 * math.pi)) / 20, abs=1e-11)


def test_empty_interval():
    assert adaptive_simpson(math.exp, 1.0, 1.0) == 0.0


def test_nonconvergence_reports_diagnostics():
    with pytest.raises(QuadratureError) as info:
        adaptive_simpson(lambda x: 1.0 / x if x else 0.0, 0.0, 1.0, tol=1e-12, max_depth=8)
    assert info.value.depth == 8
    assert info.value.interval is not None


def test_pieces_see_one_sided_values():
    # step at 0.5: the left piece must see 1 at its right end, not 2
    def f(x, lo, hi):
        if x == hi:
            return 1.0 if hi <= 0.5 else 2.0
        return 1.0 if x < 0.5 else 2.0

    assert integrate_pieces(f, [0.0, 0.5, 1.0]) == pytest.approx(1.5, abs=1e-14)
