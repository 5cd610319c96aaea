"""Adaptive Simpson quadrature over piecewise-smooth integrands."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

from .errors import QuadratureError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_DEPTH = 40
# levels subdivided unconditionally so a lucky coarse estimate cannot stop early
MIN_DEPTH = 4


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> float:
    """Integrate ``f`` over [a, b] to absolute tolerance ``tol``.

    Raises:
        QuadratureError: if an interval still misses its share of the
            tolerance at ``max_depth``.
    """
    if b < a:
        raise ValueError(f"empty interval [{a}, {b}]")
    if a == b:
        return 0.0

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm = f(lmid)
        frm = f(rmid)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if depth >= MIN_DEPTH and abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{lo}, {hi}] "
                f"(error estimate {abs(delta) / 15.0:.3g} > {eps:.3g}) at depth {depth}",
                interval=(lo, hi),
                depth=depth,
                error_estimate=abs(delta) / 15.0,
            )
        return recurse(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1
        )

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)


def integrate_pieces(
    f: Callable[[float, float, float], float],
    breakpoints: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> float:
    """Integrate over consecutive pieces, splitting the tolerance by width.

    ``f(x, lo, hi)`` is evaluated for x in [lo, hi] of the current piece, so
    an integrand with a jump at a breakpoint can return the one-sided limit
    belonging to the piece being integrated.
    """
    points = sorted(set(breakpoints))
    total_width = points[-1] - points[0]
    if total_width <= 0:
        return 0.0
    pieces = []
    for lo, hi in zip(points, points[1:]):
        share = tol * (hi - lo) / total_width
        pieces.append(adaptive_simpson(lambda x: f(x, lo, hi), lo, hi, share, max_depth))
    return math.fsum(pieces)
