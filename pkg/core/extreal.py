# core/extreal.py
# Extended reals (-inf, +inf] as plain floats, plus the few operations whose
# conventions differ from IEEE arithmetic.

import math
from typing import Iterable, Union

ExtReal = float
INF = math.inf

JsonReal = Union[float, str]


def is_inf(x: ExtReal) -> bool:
    return math.isinf(x) and x > 0


def ext_sum(values: Iterable[ExtReal]) -> ExtReal:
    """Compensated sum in the given order; any +inf term makes the sum +inf."""
    finite = []
    for v in values:
        if math.isnan(v):
            raise ValueError("NaN term in extended-real sum")
        if math.isinf(v):
            if v > 0:
                return INF
            raise ValueError("-inf term in extended-real sum")
        finite.append(v)
    return math.fsum(finite)


def singular_term(weight: ExtReal, mass: float) -> ExtReal:
    """weight * mass with 0 * (+inf) = 0.

    Only for the singular part f*(0) * P(dP/dQ = +inf); everywhere else IEEE
    rules apply and 0 * inf stays NaN.
    """
    if mass == 0.0:
        return 0.0
    return weight * mass


def ext_le(a: ExtReal, b: ExtReal, tol: float = 0.0) -> bool:
    """a <= b + tol * max(1, |b|); +inf only lies below +inf."""
    if is_inf(b):
        return True
    if is_inf(a):
        return False
    return a <= b + tol * max(1.0, abs(b))


def ext_close(a: ExtReal, b: ExtReal, tol: float) -> bool:
    """|a - b| <= tol * max(1, |a|, |b|); two +inf compare equal."""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def to_json(x: ExtReal) -> JsonReal:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def from_json(x: JsonReal) -> ExtReal:
    if isinstance(x, str):
        if x == "inf":
            return INF
        if x == "-inf":
            return -INF
        raise ValueError(f"not an extended real: {x!r}")
    return float(x)
