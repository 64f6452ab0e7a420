# core/divergence.py
# D_f on finite supports, its symmetric split, Renyi divergence, entropy,
# and the data-processing / Markov checks built on them.

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import entr

from config.settings import TOL_THEOREM
from core.errors import InputError, LabelMismatchError
from core.extreal import INF, ExtReal, ext_le, ext_sum, is_inf, singular_term
from core.generators import Generator, builtin, conjugate
from core.measures import (
    DiscreteDistribution,
    JointDistribution,
    LabelMap,
    StochasticKernel,
    align,
    flatten,
    is_fiber_constant,
    markov_compose,
    markov_triple,
    pushforward_map,
)


@dataclass(frozen=True)
class DivergenceValue:
    """value = absolutely_continuous_part + f*(0) * singular_mass (0 * inf = 0)"""
    value: ExtReal
    singular_mass: float
    absolutely_continuous_part: ExtReal


def _terms_q_positive(p: np.ndarray, q: np.ndarray, g: Generator):
    """q g(p/q) on {q > 0}, label order; p = 0 uses g(0)."""
    terms = []
    pos = q > 0
    ratio_ok = pos & (p > 0)
    vals = np.zeros_like(q)
    if np.any(ratio_ok):
        vals[ratio_ok] = q[ratio_ok] * g(p[ratio_ok] / q[ratio_ok])
    for i in np.flatnonzero(pos):
        if p[i] > 0:
            terms.append(float(vals[i]))
        else:
            terms.append(singular_term(g.at_zero, float(q[i])))
    return terms


def divergence_from_densities(p: np.ndarray, q: np.ndarray, g: Generator) -> DivergenceValue:
    """The one D_f kernel: sum_{q>0} q g(p/q) + f*(0) sum_{q=0} p."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InputError("density vectors differ in shape")
    ac = ext_sum(_terms_q_positive(p, q, g))
    singular_mass = math.fsum(p[q == 0])
    value = ext_sum([ac, singular_term(g.conj_at_zero, singular_mass)])
    return DivergenceValue(value, singular_mass, ac)


def f_divergence(P: DiscreteDistribution, Q: DiscreteDistribution, g: Generator) -> DivergenceValue:
    pair = align(P, Q)
    return divergence_from_densities(pair.p, pair.q, g)


def symmetric_decomposition(P: DiscreteDistribution, Q: DiscreteDistribution,
                            g: Generator) -> Tuple[ExtReal, ExtReal]:
    """(sum_{p<q} q g(p/q), sum_{q<p} p g*(q/p)); the parts add up to D_f."""
    pair = align(P, Q)
    p, q = pair.p, pair.q
    gs = conjugate(g)
    lower = []
    upper = []
    for a, b in zip(p, q):
        if a < b:
            lower.append(b * g(a / b) if a > 0 else singular_term(g.at_zero, b))
        elif b < a:
            upper.append(a * gs(b / a) if b > 0 else singular_term(gs.at_zero, a))
    return ext_sum(lower), ext_sum(upper)


def two_point_divergence(s: float, t: float, g: Generator) -> ExtReal:
    """D_f(P_s || P_t) for the two-point laws P_s = (s, 1 - s)"""
    if not (0.0 < s < 1.0 and 0.0 < t < 1.0):
        raise InputError(f"two_point_divergence needs s, t in (0, 1), got {s!r}, {t!r}")
    return ext_sum([g(s / t) * t, g((1.0 - s) / (1.0 - t)) * (1.0 - t)])


def renyi(P: DiscreteDistribution, Q: DiscreteDistribution, alpha: float) -> ExtReal:
    """(alpha - 1)^-1 log sum p^alpha q^(1 - alpha); alpha = 1 is KL"""
    a = float(alpha)
    if not a > 0:
        raise InputError(f"Renyi order must be positive, got {alpha!r}")
    if a == 1.0:
        return f_divergence(P, Q, builtin("KL")).value
    pair = align(P, Q)
    p, q = pair.p, pair.q
    both = (p > 0) & (q > 0)
    if a > 1 and np.any((p > 0) & (q == 0)):
        return INF
    total = math.fsum(p[both] ** a * q[both] ** (1.0 - a))
    if total == 0.0:
        return INF
    return math.log(total) / (a - 1.0)


def alpha_divergence_from_renyi(r: ExtReal, alpha: float) -> ExtReal:
    """Invert R_a = (a - 1)^-1 log(1 + a (a - 1) D_a)"""
    a = float(alpha)
    if is_inf(r):
        return 1.0 / (a * (1.0 - a)) if a < 1 else INF
    return math.expm1((a - 1.0) * r) / (a * (a - 1.0))


def entropy(P: DiscreteDistribution) -> float:
    """-sum p log p with 0 log 0 = 0"""
    return math.fsum(entr(P.masses))


# ===================
# Data processing
# ===================

@dataclass(frozen=True)
class DpiResult:
    before: ExtReal
    after: ExtReal
    holds: bool
    equality_expected: Optional[bool] = None   # None: not classifiable (before = +inf or g not strict)


def dpi_check(P: DiscreteDistribution, Q: DiscreteDistribution, phi: LabelMap, g: Generator,
              tol: float = TOL_THEOREM) -> DpiResult:
    before = f_divergence(P, Q, g).value
    after = f_divergence(pushforward_map(P, phi), pushforward_map(Q, phi), g).value
    expected = None
    if g.strictly_convex_on_positives and not is_inf(before):
        expected = is_fiber_constant(P, Q, phi)
    return DpiResult(before, after, ext_le(after, before, tol), expected)


@dataclass(frozen=True)
class MarkovInvariance:
    d_xyz: ExtReal
    d_xy: ExtReal
    d_xz: ExtReal


def markov_invariance_check(J_xy: JointDistribution, J2_xy: JointDistribution,
                            K: StochasticKernel, g: Generator) -> MarkovInvariance:
    """D_f between (X', Y', Z') and (X, Y, Z) sharing the kernel Z | Y.

    The first joint is the reference law P_(X,Y); the second is P_(X',Y').
    """
    if J_xy.x_labels != J2_xy.x_labels or J_xy.y_labels != J2_xy.y_labels:
        raise LabelMismatchError("both joints must use identical label sets")
    d_xyz = f_divergence(markov_triple(J2_xy, K), markov_triple(J_xy, K), g).value
    d_xy = f_divergence(flatten(J2_xy), flatten(J_xy), g).value
    d_xz = f_divergence(flatten(markov_compose(J2_xy, K)), flatten(markov_compose(J_xy, K)), g).value
    return MarkovInvariance(d_xyz, d_xy, d_xz)
