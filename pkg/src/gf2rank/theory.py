"""Closed-form predictions for sparse random GF(2) column models.

Everything is driven by the fixed point of  x -> (1 - exp(-c*x))^(k-1)  on
[0, 1], where c = k*m/n is the edge density.  The largest fixed point feeds
the 2-core size fractions, the rank law, the two threshold densities, and
the limit value of the minimum weight basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

FP_TOL = 1e-10
ROOT_TOL = 1e-6
QUAD_TOL = 1e-6

_X_FLOOR = 1e-9


@dataclass(frozen=True)
class TheoryPoint:
    """Derived quantities at a density point (k, c), with m = c*n/k."""

    k: int
    c: float
    x: float          # largest fixed point; 0 when no positive root exists
    core_v: float     # lim |C2| / n
    core_e: float     # lim |E(C2)| / n
    rank_frac: float  # lim rank / n


@dataclass(frozen=True)
class Thresholds:
    k: int
    c_hat: float   # density where a positive fixed point first exists
    c_star: float  # density where core vertex and edge counts coincide


@dataclass(frozen=True)
class MwbLimit:
    k: int
    value: float       # limit of n^(k-2) E(W) / (k-1)!
    quad_error: float  # quadrature estimate plus tail-truncation bound


def _fp_map(k: int, c: float, x: float) -> float:
    return (1.0 - math.exp(-c * x)) ** (k - 1)


def largest_fixed_point(k: int, c: float, tol: float = FP_TOL) -> float:
    """Largest x in (0, 1] with x = (1 - exp(-c*x))^(k-1), or 0 if none.

    The map is increasing in x and maps [0, 1] into itself, so iterating
    from x = 1 descends monotonically onto the largest fixed point.  When
    plain iteration converges slowly (near-tangency), the root is boxed and
    polished with Brent's method.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if c < 0:
        raise ValueError("c must be nonnegative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if c == 0.0:
        return 0.0
    x = 1.0
    for _ in range(200):
        xn = _fp_map(k, c, x)
        if xn < _X_FLOOR:
            return 0.0
        if x - xn <= tol:
            x = xn
            break
        x = xn
    if x - _fp_map(k, c, x) > tol:
        # slow descent: bracket the root below the current iterate
        g = lambda t: t - _fp_map(k, c, t)
        lo = None
        step = max(10.0 * tol, 1e-8)
        while step < 1.0:
            cand = x - step
            if cand <= _X_FLOOR:
                break
            if g(cand) < 0.0:
                lo = cand
                break
            step *= 4.0
        if lo is not None:
            x = brentq(g, lo, x, xtol=tol * 1e-3, rtol=8.9e-16)
        else:
            for _ in range(200_000):
                xn = _fp_map(k, c, x)
                if xn < _X_FLOOR:
                    return 0.0
                if x - xn <= tol:
                    x = xn
                    break
                x = xn
    if x < _X_FLOOR:
        return 0.0
    return x


def _positive_root_exists(k: int, c: float, iters: int = 30_000) -> bool:
    x = 1.0
    for _ in range(iters):
        xn = _fp_map(k, c, x)
        if xn < 1e-6:
            return False
        if x - xn < 1e-13:
            return True
        x = xn
    return x > 1e-2


def hat_c(k: int, tol: float = ROOT_TOL) -> float:
    """Density threshold where a positive fixed point first appears (k >= 3).

    For k = 2 positive roots exist for every c > 1 but the core grows
    gradually rather than appearing at a jump, so no value is exposed.
    """
    if k < 3:
        raise ValueError("threshold is defined here for k >= 3 only")
    lo, hi = 0.5, float(2 * k)
    if not _positive_root_exists(k, hi):
        raise RuntimeError(f"no positive fixed point up to c={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _positive_root_exists(k, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _c_from_y(k: int, y: float) -> float:
    return 1.0 / (y ** (k - 2) - ((k - 1) / k) * y ** (k - 1))


def c_star(k: int, tol: float = ROOT_TOL) -> float:
    """Density where the core has equally many vertices and edges.

    Solved through the substitution y = x^(1/(k-1)):  the positive root of
    y = 1 - exp(-k*y / (k - (k-1)*y))  determines  c = 1/(y^(k-2) -
    ((k-1)/k) y^(k-1)).  For k = 2 the value is 0: single loose edges
    already form rank-deficient-free trees, so the rank law has no first
    branch to leave.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if k == 2:
        return 0.0
    h = lambda y: y - (1.0 - math.exp(-k * y / (k - (k - 1) * y)))
    # scan downward from 1 for the sign change into the largest root
    hi = 1.0 - 1e-12
    val_hi = h(hi)
    lo = None
    y = hi
    while y > 1e-4:
        y -= 1e-3
        if h(y) * val_hi < 0:
            lo = y
            break
    if lo is None:
        raise RuntimeError(f"no positive root of the y-equation for k={k}")
    y_root = brentq(h, lo, lo + 1e-3, xtol=1e-15, rtol=8.9e-16)
    return _c_from_y(k, y_root)


def c_star_direct(k: int, tol: float = ROOT_TOL) -> float:
    """Cross-check route: root of core_v(c) - core_e(c) on c >= c_hat."""
    if k < 3:
        raise ValueError("direct route needs k >= 3")
    ch = hat_c(k, tol=1e-8)

    def diff(c: float) -> float:
        v, e = core_fractions(k, c, tol=1e-13)
        return v - e

    lo = ch + 1e-6
    hi = float(2 * k)
    while diff(lo) < 0 and lo < hi:
        lo += 1e-4
    return brentq(diff, lo, hi, xtol=tol * 1e-3, rtol=8.9e-16)


def core_fractions(k: int, c: float, tol: float = FP_TOL
                   ) -> tuple[float, float]:
    """(vertices, edges) of the 2-core as fractions of n; (0, 0) when empty.

    core_v = x^(1/(k-1)) - c*x + c*x^(k/(k-1)),  core_e = c*x^(k/(k-1))/k.
    """
    if k < 3:
        raise ValueError("core fractions are exposed for k >= 3 only")
    if c < 0:
        raise ValueError("c must be nonnegative")
    x = largest_fixed_point(k, c, tol)
    if x == 0.0:
        return 0.0, 0.0
    y = x ** (1.0 / (k - 1))
    xe = x * y  # x^(k/(k-1))
    return y - c * x + c * xe, c * xe / k


def core_v_alternate(k: int, c: float, tol: float = FP_TOL) -> float:
    """Core vertex fraction in the equivalent form 1 - e^(-cx)(1 + cx)."""
    if k < 3:
        raise ValueError("core fractions are exposed for k >= 3 only")
    x = largest_fixed_point(k, c, tol)
    if x == 0.0:
        return 0.0
    return 1.0 - math.exp(-c * x) * (1.0 + c * x)


def rank_fraction(k: int, c: float, tol: float = FP_TOL) -> float:
    """lim rank/n:  c/k below the c* threshold, then the core-corrected law.

    Above c* the prediction is (c/k)(1 - x^(k/(k-1))) + core_v; the two
    branches agree at c = c*.
    """
    if k < 3:
        raise ValueError("rank fraction is exposed for k >= 3 only")
    if c < 0:
        raise ValueError("c must be nonnegative")
    cs = c_star(k)
    if c < cs:
        return c / k
    x = largest_fixed_point(k, c, tol)
    if x == 0.0:
        return c / k
    y = x ** (1.0 / (k - 1))
    xe = x * y
    core_v = y - c * x + c * xe
    return (c / k) * (1.0 - xe) + core_v


def full_rank_probability(c: float) -> float:
    """Limit probability of full rank (up to parity) at m = n(log n + c)/k."""
    return math.exp(-math.exp(-c))


def expected_zero_row_sets(s: int, c: float) -> float:
    """Expected number of s-sets of empty rows: exp(-c*s)/s!."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return math.exp(-c * s) / math.factorial(s)


def _adaptive_simpson(f, a: float, b: float, tol: float
                      ) -> tuple[float, float]:
    """Recursive adaptive Simpson; returns (value, error_estimate)."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = (left + right - whole) / 15.0
        if depth >= 48 or abs(err) <= tol:
            return left + right + err, abs(err)
        lv, le = recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        rv, re = recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
        return lv + rv, le + re

    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def mwb_integrand(k: int, c: float) -> float:
    """Integrand of the minimum-weight-basis limit at density c."""
    x = largest_fixed_point(k, c, tol=1e-12)
    return math.exp(-c * x) * (1.0 + (k - 1) * c * x / k) - (c / k) * (1.0 - x)


def mwb_limit(k: int, quad_tol: float = QUAD_TOL) -> MwbLimit:
    """Limit of n^(k-2) E(W) / (k-1)! for the minimum weight basis.

    Closed part c*(1 - c*/(2k)) plus the tail integral of
    e^(-cx)(1 + (k-1)cx/k) - (c/k)(1 - x) from c* on.  The integrand decays
    at least like e^(-0.99 c), so truncating at C with tail bound
    (100/99) e^(-0.99 C) <= quad_tol/2 and spending the other quad_tol/2 on
    adaptive Simpson keeps the total error below quad_tol (up to the
    Simpson estimate itself, which is reported).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if quad_tol <= 0:
        raise ValueError("quad_tol must be positive")
    cs = c_star(k)
    closed = cs * (1.0 - cs / (2.0 * k))
    tail_at = lambda cmax: (100.0 / 99.0) * math.exp(-0.99 * cmax)
    c_max = max(cs + 1.0, -math.log(0.5 * quad_tol * 0.99) / 0.99)
    truncation = tail_at(c_max)
    if k == 2:
        # x = 0 exactly on [0, 1]: the integrand is 1 - c/2 there
        head = 0.75  # integral of 1 - c/2 over [0, 1]
        body, err = _adaptive_simpson(lambda c: mwb_integrand(2, c),
                                      1.0, c_max, 0.5 * quad_tol)
        return MwbLimit(2, closed + head + body, err + truncation)
    body, err = _adaptive_simpson(lambda c: mwb_integrand(k, c),
                                  cs, c_max, 0.5 * quad_tol)
    return MwbLimit(k, closed + body, err + truncation)


def mwb_large_k_bounds(k: int) -> tuple[float, float]:
    """Interval (k/2)(1 ± 5 e^-k) that contains the basis-weight limit."""
    if k < 3:
        raise ValueError("the large-k bound applies for k >= 3")
    spread = 5.0 * math.exp(-k)
    return (k / 2.0) * (1.0 - spread), (k / 2.0) * (1.0 + spread)


def c_star_bounds(k: int) -> tuple[float, float]:
    """Interval [k(1 - 1.5 e^-k), k] that contains c* (k >= 4)."""
    if k < 4:
        raise ValueError("the c* bound applies for k >= 4")
    return k * (1.0 - 1.5 * math.exp(-k)), float(k)


def theory_point(k: int, c: float, tol: float = FP_TOL) -> TheoryPoint:
    if k < 3:
        raise ValueError("theory points are exposed for k >= 3 only")
    x = largest_fixed_point(k, c, tol)
    core_v, core_e = core_fractions(k, c, tol)
    return TheoryPoint(k=k, c=c, x=x, core_v=core_v, core_e=core_e,
                       rank_frac=rank_fraction(k, c, tol))


def thresholds(k: int, tol: float = ROOT_TOL) -> Thresholds:
    return Thresholds(k=k, c_hat=hat_c(k, tol), c_star=c_star(k, tol))
