"""The five concrete mean families.

All power sums are evaluated in the log domain with a max shift, so
entries spanning many orders of magnitude or large exponents do not
overflow.  Implicit means (Bajraktarevic, deviation) are solved by
bracketed bisection on [min(x), max(x)]: the defining functions are only
guaranteed continuous and strictly monotone, so no derivative-based
method is used.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .core import (
    BracketError,
    CancellationWarning,
    DeviationSpec,
    Generator,
    as_samples,
)

__all__ = [
    "power_mean",
    "quasi_arithmetic_mean",
    "gini_mean",
    "bajraktarevic_mean",
    "deviation_mean",
]

# exponents closer than this to a removable singularity trigger a
# CancellationWarning; the branch itself is chosen by exact comparison
_NEAR_SINGULAR = 1e-8

_BISECT_REL_TOL = 1e-13
_BISECT_MAX_ITER = 200


def _log_power_sum(logx: np.ndarray, p: float) -> float:
    """log(sum_i x_i**p), computed as a max-shifted log-sum-exp."""
    a = p * logx
    m = float(a.max())
    return m + math.log(float(np.exp(a - m).sum()))


def power_mean(p: float, x) -> float:
    """((x_1**p + ... + x_n**p) / n) ** (1/p); geometric mean at p = 0."""
    xs = as_samples(x)
    logx = np.log(xs)
    if p == 0.0:
        return math.exp(float(logx.mean()))
    if abs(p) < _NEAR_SINGULAR:
        warnings.warn(
            f"power exponent p={p!r} is within {_NEAR_SINGULAR:g} of 0; "
            "cancellation degrades accuracy",
            CancellationWarning,
            stacklevel=2,
        )
    return math.exp((_log_power_sum(logx, p) - math.log(xs.size)) / p)


def quasi_arithmetic_mean(gen: Generator, x) -> float:
    """Inverse of gen applied to the plain average of gen(x_i).

    Overflow inside the generator is reported as OverflowError, never
    silently replaced.
    """
    xs = as_samples(x)
    if not gen.strictly_monotone:
        raise ValueError(
            f"generator {gen.describe()} is not strictly monotone on (0, inf)"
        )
    vals = gen(xs)
    return float(gen.inverse(float(vals.mean())))


def gini_mean(p: float, q: float, x) -> float:
    """(sum x**p / sum x**q) ** (1/(p-q)) for p != q.

    For p == q the limiting form exp(sum x**p ln x / sum x**p) is used.
    The two exponents are interchangeable; the implementation orders
    them, so gini_mean(p, q, x) == gini_mean(q, p, x) bit for bit.
    """
    xs = as_samples(x)
    logx = np.log(xs)
    if p == q:
        a = p * logx
        w = np.exp(a - float(a.max()))
        return math.exp(float((w * logx).sum() / w.sum()))
    if p < q:
        p, q = q, p
    if abs(p - q) < _NEAR_SINGULAR:
        warnings.warn(
            f"Gini exponents p={p!r}, q={q!r} are within {_NEAR_SINGULAR:g} "
            "of each other; cancellation degrades accuracy",
            CancellationWarning,
            stacklevel=2,
        )
    return math.exp(
        (_log_power_sum(logx, p) - _log_power_sum(logx, q)) / (p - q)
    )


def _bisect(fn, lo: float, hi: float, *, decreasing: bool) -> float:
    """Root of a monotone fn on [lo, hi] with fn(lo), fn(hi) bracketing 0."""
    a, b = lo, hi
    for _ in range(_BISECT_MAX_ITER):
        if (b - a) <= _BISECT_REL_TOL * max(abs(a), abs(b)):
            break
        mid = 0.5 * (a + b)
        val = fn(mid)
        if (val >= 0.0) == decreasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def bajraktarevic_mean(f: Generator, g: Generator, x) -> float:
    """(f/g)-inverse of sum(f(x_i)) / sum(g(x_i)).

    g must be positive on the data and f/g strictly monotone; the
    inverse is found by bisection on [min(x), max(x)].  A bracket that
    does not contain the target signals a violated monotonicity
    contract and raises BracketError.
    """
    xs = as_samples(x)
    gv = g(xs)
    if np.any(gv <= 0.0):
        raise ValueError(f"generator {g.describe()} is not positive on the sample")
    t = float(f(xs).sum() / gv.sum())
    lo, hi = float(xs.min()), float(xs.max())
    if lo == hi:
        return lo

    def ratio(y: float) -> float:
        return float(f(y)) / float(g(y))

    r_lo, r_hi = ratio(lo), ratio(hi)
    if r_lo == r_hi:
        raise BracketError(
            f"ratio {f.describe()}/{g.describe()} is constant on "
            f"[{lo:g}, {hi:g}]; not strictly monotone"
        )
    increasing = r_hi > r_lo
    low_end, high_end = (r_lo, r_hi) if increasing else (r_hi, r_lo)
    slack = _BISECT_REL_TOL * max(abs(r_lo), abs(r_hi), abs(t))
    if t < low_end - slack or t > high_end + slack:
        raise BracketError(
            f"target {t:g} outside ratio range [{low_end:g}, {high_end:g}]; "
            "monotonicity contract violated"
        )
    return _bisect(lambda y: ratio(y) - t, lo, hi, decreasing=not increasing)


def deviation_mean(dev: DeviationSpec, x) -> float:
    """Unique root y in [min(x), max(x)] of sum_i E(x_i, y) = 0.

    The summed deviation is strictly decreasing in y, so the bracket is
    valid; a missing sign change means the deviation contract is broken
    and raises BracketError.
    """
    xs = as_samples(x)
    lo, hi = float(xs.min()), float(xs.max())
    if lo == hi:
        return lo

    def total(y: float) -> float:
        return float(np.sum(dev(xs, y)))

    f_lo, f_hi = total(lo), total(hi)
    slack = _BISECT_REL_TOL * max(abs(f_lo), abs(f_hi), 1e-300)
    if f_lo < 0.0 or f_hi > 0.0:
        if f_lo < -slack or f_hi > slack:
            raise BracketError(
                "summed deviation has no admissible sign change on "
                f"[{lo:g}, {hi:g}] (F(min)={f_lo:g}, F(max)={f_hi:g}); "
                "deviation contract violated"
            )
        return lo if abs(f_lo) <= abs(f_hi) else hi
    return _bisect(total, lo, hi, decreasing=True)
