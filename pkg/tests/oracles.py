"""Independent reference computations used to freeze expected values.

Nothing here imports the package's evaluators: states are enumerated
explicitly and integrals use mpmath quadrature at high precision.
"""

import itertools
import math
from fractions import Fraction

import mpmath

mpmath.mp.dps = 50


def element_unavailability(lam, t, t1, n=1, e=0.0, left=False):
    """1 - exp(-lam*t + e*lam*p*T0) with p partial tests done by t."""
    lam, t = mpmath.mpf(lam), mpmath.mpf(t)
    t0 = mpmath.mpf(t1) / n
    p = int(mpmath.floor(t / t0 + mpmath.mpf("1e-30")))
    if left and p > 0 and abs(t - p * t0) < mpmath.mpf("1e-20"):
        p -= 1
    p = min(p, n - 1)
    return 1 - mpmath.exp(-lam * t + mpmath.mpf(e) * lam * p * t0)


def barrier_down_by_enumeration(q, m, n):
    """P(fewer than m of n elements up), summing over all 2^n states."""
    total = mpmath.mpf(0)
    for state in itertools.product((0, 1), repeat=n):
        if sum(state) < m:
            prob = mpmath.mpf(1)
            for up in state:
                prob *= (1 - q) if up else q
            total += prob
    return total


def pfd(m, n, lam, t1, t, parts=1, e=0.0, left=False):
    return barrier_down_by_enumeration(element_unavailability(lam, t, t1, parts, e, left), m, n)


def pfd_average(m, n, lam, t1, parts=1, e=0.0):
    """Quadrature of the enumerated PFD(t), split at the test instants."""
    t0 = mpmath.mpf(t1) / parts
    total = mpmath.mpf(0)
    for p in range(parts):
        lo, hi = p * t0, (p + 1) * t0
        # inside segment p the exposure is lam*(t - e*p*T0)
        def f(t, p=p):
            q = 1 - mpmath.exp(-mpmath.mpf(lam) * (t - mpmath.mpf(e) * p * t0))
            return barrier_down_by_enumeration(q, m, n)
        total += mpmath.quad(f, [lo, hi])
    return total / t1


def one_minus_exp_over_u(u, order=40):
    """(1 - e^-u)/u by its Taylor series, in exact rational arithmetic."""
    u = Fraction(u)
    return sum(Fraction((-1) ** k) * u**k / math.factorial(k + 1) for k in range(order))
