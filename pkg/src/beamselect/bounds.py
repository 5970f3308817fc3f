"""Large-network received power bounds and their numerically optimized constants.

The amplitude-threshold rule with zero channel phases bounds the optimum from
above by (pi/4) f(r) per node; the sector rule bounds it from below by
sin^2(alpha)/(4 alpha) * f(r) per node.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_SQRT_PI = math.sqrt(math.pi)


def erfc(x: float) -> float:
    return math.erfc(x)


def tail_bracket(r: float) -> float:
    """erfc(r) + (2r/sqrt(pi)) exp(-r^2).

    Equals (2/sqrt(pi)) * int_r^inf 2 x^2 exp(-x^2) dx.
    """
    return erfc(r) + 2.0 * r / _SQRT_PI * math.exp(-r * r)


def f_of_r(r: float) -> float:
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    return math.exp(r * r) * tail_bracket(r) ** 2


def upper_bound_per_node(r: float) -> float:
    """Limit of P_ub(r)/K for the zero-phase amplitude threshold rule."""
    return math.pi / 4.0 * f_of_r(r)


def sector_gain(alpha: float) -> float:
    if not 0.0 < alpha <= math.pi:
        raise ValueError(f"alpha must lie in (0, pi], got {alpha}")
    return math.sin(alpha) ** 2 / (4.0 * alpha)


def lower_bound_per_node(r: float, alpha: float) -> float:
    """Limit of P_lb(r, alpha)/K for the sector rule."""
    return sector_gain(alpha) * f_of_r(r)


def golden_section_max(
    fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10
) -> float:
    """Maximizer of a unimodal ``fun`` on [lo, hi]."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    return (a + b) / 2.0


def bisect_root(fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14) -> float:
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("root is not bracketed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def maximize_f() -> tuple[float, float]:
    r_star = golden_section_max(f_of_r, 0.0, 3.0)
    return r_star, f_of_r(r_star)


def sector_stationarity(alpha: float) -> float:
    """cos(alpha) - sin(alpha)/(2 alpha); zero at the maximizer of sector_gain."""
    return math.cos(alpha) - math.sin(alpha) / (2.0 * alpha)


def maximize_alpha() -> float:
    return bisect_root(sector_stationarity, 0.1, math.pi - 0.1)


@dataclass(frozen=True)
class BoundConstants:
    r_star: float
    f_max: float
    alpha_star: float
    upper_c: float
    lower_c: float
    gap_db: float
    fraction_ub: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@lru_cache(maxsize=1)
def bound_constants() -> BoundConstants:
    r_star, f_max = maximize_f()
    alpha_star = maximize_alpha()
    upper_c = math.pi / 4.0 * f_max
    lower_c = sector_gain(alpha_star) * f_max
    return BoundConstants(
        r_star=r_star,
        f_max=f_max,
        alpha_star=alpha_star,
        upper_c=upper_c,
        lower_c=lower_c,
        gap_db=10.0 * math.log10(upper_c / lower_c),
        fraction_ub=math.exp(-r_star * r_star),
    )
