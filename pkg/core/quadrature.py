# core/quadrature.py
# Tensor Gauss-Legendre rule on the unit square, graded toward the corners.
#
# Nodes come from s -> s^k / (s^k + (1 - s)^k). Both u and 1 - u are returned
# so integrands can form (1 - 2u) without cancellation near the edges.

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from config.settings import QUADRATURE_GRADING
from core.errors import InputError


@dataclass(frozen=True)
class GradedRule:
    """1-D rule on (0, 1): nodes u, complements 1 - u, weights"""
    nodes: np.ndarray
    complements: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=32)
def graded_rule(order: int, grading: int = QUADRATURE_GRADING) -> GradedRule:
    if order < 1:
        raise InputError(f"quadrature order must be positive, got {order}")
    if grading < 1:
        raise InputError(f"grading exponent must be >= 1, got {grading}")
    x, w = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (x + 1.0)
    sc = 0.5 * (1.0 - x)
    w = 0.5 * w
    a = s ** grading
    b = sc ** grading
    den = a + b
    u = a / den
    uc = b / den
    jac = grading * s ** (grading - 1) * sc ** (grading - 1) / den ** 2
    rule = GradedRule(u, uc, w * jac)
    for arr in (rule.nodes, rule.complements, rule.weights):
        arr.setflags(write=False)
    return rule


SquareIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def integrate_unit_square(fn: SquareIntegrand, order: int,
                          grading: int = QUADRATURE_GRADING) -> float:
    """Integral of fn(u, 1 - u, v, 1 - v) over [0, 1]^2"""
    rule = graded_rule(order, grading)
    u, v = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    uc, vc = np.meshgrid(rule.complements, rule.complements, indexing="ij")
    values = np.asarray(fn(u, uc, v, vc), dtype=float)
    return float(rule.weights @ values @ rule.weights)

