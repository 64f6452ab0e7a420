# core/csiszar.py
# Csiszar dependence index S_f(X, Y) = D_f(P_X (x) P_Y || P_(X,Y))
# NOTE: argument order is product first, joint second. f-divergences are not
# symmetric, so swapping the two gives a different number.

from dataclasses import dataclass

import numpy as np

from config.settings import TOL_THEOREM
from core.divergence import divergence_from_densities, entropy
from core.errors import ConstraintError
from core.extreal import ExtReal, ext_close, ext_le, ext_sum, singular_term
from core.generators import Generator
from core.measures import (
    DiscreteDistribution,
    JointDistribution,
    LabelMap,
    StochasticKernel,
    augment_independent,
    conditionals,
    flatten,
    joint_pushforward,
    markov_compose,
    marginals,
)


@dataclass(frozen=True)
class CsiszarResult:
    value: ExtReal
    via_joint: ExtReal
    via_conditionals: ExtReal


def product_masses(J: JointDistribution) -> np.ndarray:
    """P_X(x) P_Y(y) laid out like J.pmf"""
    return np.outer(J.pmf.sum(axis=1), J.pmf.sum(axis=0))


def independence_gap(J: JointDistribution) -> float:
    """max over cells of |J - P_X x P_Y|"""
    return float(np.max(np.abs(J.pmf - product_masses(J))))


def _via_conditionals(J: JointDistribution, g: Generator) -> ExtReal:
    """sum_x P_X(x) D_f(P_Y || P_{Y|X=x}) over charged x"""
    px = J.pmf.sum(axis=1)
    py = J.pmf.sum(axis=0)
    K = conditionals(J)
    terms = []
    for i, ok in enumerate(K.usable):
        if not ok:
            continue
        d = divergence_from_densities(py, K.rows[i], g).value
        terms.append(singular_term(d, float(px[i])))
    return ext_sum(terms)


def csiszar_index(J: JointDistribution, g: Generator) -> CsiszarResult:
    via_joint = divergence_from_densities(product_masses(J).ravel(), J.pmf.ravel(), g).value
    return CsiszarResult(via_joint, via_joint, _via_conditionals(J, g))


def mutual_information(J: JointDistribution) -> float:
    """H(X) + H(Y) - H(X, Y)"""
    PX, PY = marginals(J)
    return entropy(PX) + entropy(PY) - entropy(flatten(J))


@dataclass(frozen=True)
class TransformCheck:
    before: ExtReal
    after: ExtReal
    holds: bool


def transform_reduces(J: JointDistribution, phi_x: LabelMap, phi_y: LabelMap, g: Generator,
                      tol: float = TOL_THEOREM) -> TransformCheck:
    before = csiszar_index(J, g).value
    after = csiszar_index(joint_pushforward(J, phi_x, phi_y), g).value
    return TransformCheck(before, after, ext_le(after, before, tol))


@dataclass(frozen=True)
class ChainCheck:
    s_xy: ExtReal
    s_xz: ExtReal
    holds: bool


def markov_chain_monotonicity(J_xy: JointDistribution, K_z_given_y: StochasticKernel,
                              g: Generator, tol: float = TOL_THEOREM) -> ChainCheck:
    s_xy = csiszar_index(J_xy, g).value
    s_xz = csiszar_index(markov_compose(J_xy, K_z_given_y), g).value
    return ChainCheck(s_xy, s_xz, ext_le(s_xz, s_xy, tol))


@dataclass(frozen=True)
class AugmentationCheck:
    s_base: ExtReal
    s_aug: ExtReal
    holds_equal: bool


def independent_augmentation_check(J_xy: JointDistribution, PU: DiscreteDistribution,
                                   g: Generator, tol: float = TOL_THEOREM) -> AugmentationCheck:
    """S_f((X, U), Y) against S_f(X, Y) for U independent of (X, Y)"""
    s_base = csiszar_index(J_xy, g).value
    s_aug = csiszar_index(augment_independent(J_xy, PU), g).value
    return AugmentationCheck(s_base, s_aug, ext_close(s_aug, s_base, tol))


# ===================
# Bernoulli pairs
# ===================

def bernoulli_joint(p: float, q: float, r: float) -> JointDistribution:
    """(X, Y) Bernoulli with P(X=1) = p, P(Y=1) = q, P(X=1, Y=1) = r"""
    cells = np.array([[1.0 - p - q + r, q - r],
                      [p - r, r]])
    if np.any(cells < 0):
        raise ConstraintError(f"(p, q, r) = ({p}, {q}, {r}) is not a joint law")
    return JointDistribution((0, 1), (0, 1), cells)


def bernoulli_index(p: float, q: float, r: float, g: Generator) -> ExtReal:
    """Four-term closed form of S_f for a Bernoulli pair (all cells charged)"""
    rho = 1.0 - p - q + r
    return ext_sum([
        g((1.0 - p) * (1.0 - q) / rho) * rho,
        g(p * (1.0 - q) / (p - r)) * (p - r),
        g(q * (1.0 - p) / (q - r)) * (q - r),
        g(p * q / r) * r,
    ])


def bernoulli_pearson(p: float, q: float, r: float) -> float:
    """Rational closed form of the Pearson index for a Bernoulli pair"""
    num = (p * q - r) ** 2 * (p * p * q + p * q * q - 2 * p * q * r - p * q + r * r)
    den = r * (p - r) * (q - r) * (p + q - r - 1.0)
    return num / den
