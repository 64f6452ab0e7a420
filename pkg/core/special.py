# core/special.py
# Dilogarithm on [-1, 1] and the closed-form Pearson divergence of the FGM family

import math

from core.errors import InputError

PI2_6 = math.pi ** 2 / 6.0
PI2_12 = math.pi ** 2 / 12.0

_SERIES_EPS = 1e-17
_SERIES_MAX_TERMS = 200


def _series(x: float) -> float:
    """sum_{k>=1} x^k / k^2, for |x| <= 1/2"""
    terms = []
    power = x
    for k in range(1, _SERIES_MAX_TERMS + 1):
        term = power / (k * k)
        terms.append(term)
        if abs(term) < _SERIES_EPS:
            break
        power *= x
    return math.fsum(terms)


def dilog(x: float) -> float:
    """Li_2(x) = sum x^k / k^2 for x in [-1, 1]"""
    x = float(x)
    if not -1.0 <= x <= 1.0:
        raise InputError(f"dilog is defined here on [-1, 1], got {x!r}")
    if x == 1.0:
        return PI2_6
    if x == -1.0:
        return -PI2_12
    if x == 0.0:
        return 0.0
    if abs(x) <= 0.5:
        return _series(x)
    if x > 0.5:
        # reflection: Li2(x) + Li2(1 - x) = pi^2/6 - log(x) log(1 - x)
        return PI2_6 - math.log(x) * math.log1p(-x) - _series(1.0 - x)
    # Landen: Li2(x) + Li2(x / (x - 1)) = -log(1 - x)^2 / 2, with x/(x-1) in (1/3, 1/2]
    return -_series(x / (x - 1.0)) - 0.5 * math.log1p(-x) ** 2


def fgm_pearson_closed_form(theta: float) -> float:
    """D_P(Pi || C_theta) = (Li2(theta) - Li2(-theta)) / (2 theta) - 1"""
    theta = float(theta)
    if not -1.0 <= theta <= 1.0:
        raise InputError(f"FGM parameter must lie in [-1, 1], got {theta!r}")
    if theta == 0.0:
        return 0.0
    if abs(theta) <= 0.5:
        # odd-power series with the leading 1 removed: sum_{k odd >= 3} theta^(k-1) / k^2
        t2 = theta * theta
        terms = []
        power = t2
        k = 3
        while k < 2 * _SERIES_MAX_TERMS:
            term = power / (k * k)
            terms.append(term)
            if term < _SERIES_EPS:
                break
            power *= t2
            k += 2
        return math.fsum(terms)
    return (dilog(theta) - dilog(-theta)) / (2.0 * theta) - 1.0
