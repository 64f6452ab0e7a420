# checks/generator_suites.py
# Suites on single generators and on D_f over random pairs:
# involution, convexity, duality, affine, nonnegativity, supremum, triangle

import math
from typing import Any, Dict

import numpy as np

from checks.base import CheckOutcome, PropertySuite
from checks.cases import dist_from_json, dist_to_json, random_generator_name, random_masses, random_pair
from checks.registry import registry
from config.settings import (
    GRID_ABS_TOL,
    GRID_INNER_HI,
    GRID_INNER_LO,
    GRID_REL_TOL,
    NEAR_COPY_GAP,
    TOL_ALGEBRAIC,
    ZERO_DIVERGENCE_TOL,
)
from core.divergence import f_divergence
from core.extreal import ext_close, ext_le, is_inf, to_json
from core.generators import affine_shift, builtin, conjugate, from_cli_name, sup_bound
from core.measures import DiscreteDistribution, align


def _log_uniform(rng: np.random.Generator, n: int, lo: float = 1e-3, hi: float = 1e3) -> list:
    return [float(x) for x in np.exp(rng.uniform(math.log(lo), math.log(hi), n))]


def _pointwise_close(a: np.ndarray, b: np.ndarray, t: np.ndarray) -> bool:
    """Absolute tolerance on the inner range of t, relative outside"""
    inner = (t >= GRID_INNER_LO) & (t <= GRID_INNER_HI)
    diff = np.abs(a - b)
    ok_inner = diff[inner] <= GRID_ABS_TOL * np.maximum(1.0, np.abs(b[inner]))
    ok_outer = diff[~inner] <= GRID_REL_TOL * np.maximum(1.0, np.abs(b[~inner]))
    return bool(ok_inner.all() and ok_outer.all())


def _root(d: float) -> float:
    return math.sqrt(max(d, 0.0))


def _pair_case(rng: np.random.Generator) -> Dict[str, Any]:
    P, Q = random_pair(rng)
    return {"f": random_generator_name(rng), "P": dist_to_json(P), "Q": dist_to_json(Q)}


class InvolutionSuite(PropertySuite):
    @property
    def name(self):
        return "involution"

    @property
    def description(self):
        return "t f*(1/t) recovers f pointwise and f*(0), f(0) swap"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        return {"f": random_generator_name(rng), "t": _log_uniform(rng, 32)}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        gs = conjugate(g)
        t = np.array(case["t"])
        twice = t * gs(1.0 / t)
        limits_ok = gs.at_zero == g.conj_at_zero and gs.conj_at_zero == g.at_zero
        passed = limits_ok and _pointwise_close(twice, g(t), t) and conjugate(gs) is g
        worst = float(np.max(np.abs(twice - g(t))))
        return CheckOutcome(passed, {"max_abs_diff": worst, "limits_swapped": limits_ok})


class ConvexitySuite(PropertySuite):
    @property
    def name(self):
        return "convexity"

    @property
    def description(self):
        return "f(1) = 0 and f(a x + (1 - a) y) <= a f(x) + (1 - a) f(y)"

    def generate_case(self, rng):
        return {"f": random_generator_name(rng), "x": _log_uniform(rng, 64),
                "y": _log_uniform(rng, 64), "a": [float(a) for a in rng.random(64)]}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        x, y, a = np.array(case["x"]), np.array(case["y"]), np.array(case["a"])
        z = a * x + (1.0 - a) * y
        rhs = a * g(x) + (1.0 - a) * g(y)
        gap = g(z) - rhs
        excess = gap - tol * np.maximum(1.0, np.abs(rhs))
        passed = g(1.0) == 0.0 and bool(np.all(excess <= 0))
        return CheckOutcome(passed, {"f_at_one": g(1.0), "max_gap": float(gap.max())})


class DualitySuite(PropertySuite):
    @property
    def name(self):
        return "duality"

    @property
    def description(self):
        return "D_f(P || Q) = D_f*(Q || P)"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        return _pair_case(rng)

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        left = f_divergence(P, Q, g).value
        right = f_divergence(Q, P, conjugate(g)).value
        return CheckOutcome(ext_close(left, right, tol), {"d_f": to_json(left), "d_f_star_swapped": to_json(right)})


class AffineSuite(PropertySuite):
    @property
    def name(self):
        return "affine"

    @property
    def description(self):
        return "D_{f + c(t - 1)} = D_f"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        case = _pair_case(rng)
        case["c"] = float(rng.uniform(-2.0, 2.0))
        return case

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        base = f_divergence(P, Q, g).value
        shifted = f_divergence(P, Q, affine_shift(g, case["c"])).value
        return CheckOutcome(ext_close(base, shifted, tol), {"d_f": to_json(base), "d_shifted": to_json(shifted)})


class NonnegativitySuite(PropertySuite):
    @property
    def name(self):
        return "nonnegativity"

    @property
    def description(self):
        return "D_f(P || Q) >= 0, and D_f = 0 iff the pmfs agree within ZERO_DIVERGENCE_TOL"

    def generate_case(self, rng):
        case = _pair_case(rng)
        P = dist_from_json(case["P"])
        # near copy of P on its own support
        support = [i for i, m in enumerate(P.masses) if m > 0]
        other = np.zeros(len(P))
        other[support] = random_masses(rng, len(support), zero_prob=0.0)
        lam = float(rng.uniform(0.0, NEAR_COPY_GAP))
        near = DiscreteDistribution(P.labels, (1.0 - lam) * P.masses + lam * other)
        case["P_near"] = dist_to_json(near)
        return case

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        near = dist_from_json(case["P_near"])
        d = f_divergence(P, Q, g).value
        self_d = f_divergence(P, P, g).value
        near_d = f_divergence(near, P, g).value
        # all suite generators are strictly convex at 1
        zero_iff_close = (d <= tol) == P.allclose(Q, ZERO_DIVERGENCE_TOL)
        passed = (d >= -tol and abs(self_d) <= tol and zero_iff_close
                  and near.allclose(P, ZERO_DIVERGENCE_TOL) and abs(near_d) <= tol)
        return CheckOutcome(passed, {"d_f": to_json(d), "d_f_self": to_json(self_d),
                                     "d_f_near": to_json(near_d)})


class SupremumSuite(PropertySuite):
    @property
    def name(self):
        return "supremum"

    @property
    def description(self):
        return "D_f <= (f + f*)(0), attained exactly at mutually singular pairs"

    def generate_case(self, rng):
        return _pair_case(rng)

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        bound = sup_bound(g)
        d = f_divergence(P, Q, g).value
        # move Q off the labels of P
        offset = max(P.labels) + 1
        Q_far = DiscreteDistribution(tuple(l + offset for l in Q.labels), Q.masses)
        singular = f_divergence(P, Q_far, g).value
        passed = ext_le(d, bound, tol) and ext_close(singular, bound, TOL_ALGEBRAIC)
        if not is_inf(bound) and abs(d - bound) <= tol:
            passed = passed and align(P, Q).mutually_singular
        return CheckOutcome(passed, {"d_f": to_json(d), "d_singular": to_json(singular),
                                     "sup_bound": to_json(bound),
                                     "mutually_singular": align(P, Q).mutually_singular})


class TriangleSuite(PropertySuite):
    @property
    def name(self):
        return "triangle"

    @property
    def description(self):
        return "sqrt(D_H) satisfies the triangle inequality"

    def generate_case(self, rng):
        P, Q = random_pair(rng)
        _, R = random_pair(rng)
        return {"P": dist_to_json(P), "Q": dist_to_json(Q), "R": dist_to_json(R)}

    def check_case(self, case, tol):
        h = builtin("H")
        P, Q, R = (dist_from_json(case[k]) for k in ("P", "Q", "R"))
        pr = _root(f_divergence(P, R, h).value)
        pq = _root(f_divergence(P, Q, h).value)
        qr = _root(f_divergence(Q, R, h).value)
        return CheckOutcome(pr <= pq + qr + tol, {"d_pr": pr, "d_pq": pq, "d_qr": qr})


def register_generator_suites():
    for suite in (InvolutionSuite(), ConvexitySuite(), DualitySuite(), AffineSuite(),
                  NonnegativitySuite(), SupremumSuite(), TriangleSuite()):
        registry.register(suite)
