# checks/divergence_suites.py
# Data processing, Renyi bridge and Markov invariance suites

import math

import numpy as np

from checks.base import CheckOutcome, PropertySuite
from checks.cases import (
    dist_from_json,
    dist_to_json,
    joint_from_json,
    joint_to_json,
    kernel_from_json,
    kernel_to_json,
    map_from_json,
    map_to_json,
    random_distribution,
    random_generator_name,
    random_joint,
    random_kernel,
    random_map,
    random_pair,
)
from checks.registry import registry
from config.settings import MAX_SUPPORT_SIZE, TOL_ALGEBRAIC
from core.divergence import alpha_divergence_from_renyi, dpi_check, f_divergence, markov_invariance_check, renyi
from core.extreal import ext_close, ext_le, to_json
from core.generators import builtin, from_cli_name
from core.measures import DiscreteDistribution


class DpiSuite(PropertySuite):
    @property
    def name(self):
        return "dpi"

    @property
    def description(self):
        return "D_f(P o phi^-1 || Q o phi^-1) <= D_f(P || Q)"

    def generate_case(self, rng):
        P, Q = random_pair(rng)
        labels = sorted(set(P.labels) | set(Q.labels))
        return {"f": random_generator_name(rng), "P": dist_to_json(P), "Q": dist_to_json(Q),
                "phi": map_to_json(random_map(rng, labels))}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        r = dpi_check(P, Q, map_from_json(case["phi"]), g, tol)
        return CheckOutcome(r.holds, {"before": to_json(r.before), "after": to_json(r.after),
                                      "equality_expected": r.equality_expected})


class DpiEqualitySuite(PropertySuite):
    """Cases built with dP/dQ constant on every fiber, so the map loses nothing"""

    @property
    def name(self):
        return "dpi-equality"

    @property
    def description(self):
        return "equality in the data-processing inequality when dP/dQ factors through phi"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        n = int(rng.integers(2, MAX_SUPPORT_SIZE + 1))
        Q = random_distribution(rng, n, zero_prob=0.0)
        phi = random_map(rng, Q.labels, int(rng.integers(1, n + 1)))
        images = sorted(set(phi.values()))
        height = {y: float(rng.uniform(0.2, 5.0)) for y in images}
        p = np.array([q * height[phi[l]] for l, q in zip(Q.labels, Q.masses)])
        P = DiscreteDistribution(Q.labels, p / p.sum())
        return {"f": random_generator_name(rng), "P": dist_to_json(P), "Q": dist_to_json(Q),
                "phi": map_to_json(phi)}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        P, Q = dist_from_json(case["P"]), dist_from_json(case["Q"])
        r = dpi_check(P, Q, map_from_json(case["phi"]), g, tol)
        equal = ext_close(r.before, r.after, tol)
        # equality_expected is None for generators that are not strictly convex
        passed = r.holds and equal and r.equality_expected is not False
        return CheckOutcome(passed, {"before": to_json(r.before), "after": to_json(r.after),
                                     "equality_expected": r.equality_expected})


class RenyiSuite(PropertySuite):
    @property
    def name(self):
        return "renyi"

    @property
    def description(self):
        return "R_a = log(1 + a(a - 1) D_a) / (a - 1) and D_1/2 = 2 D_H on Bernoulli pairs"

    def generate_case(self, rng):
        s, t = (float(x) for x in rng.uniform(0.01, 0.99, 2))
        return {"s": s, "t": t, "alpha": float(rng.choice([0.5, float(rng.uniform(0.05, 3.0))]))}

    def check_case(self, case, tol):
        P = DiscreteDistribution.bernoulli(case["s"])
        Q = DiscreteDistribution.bernoulli(case["t"])
        a = case["alpha"]
        r = renyi(P, Q, a)
        if a == 1.0:
            d_alpha = f_divergence(P, Q, builtin("alpha", 1.0)).value
            bridge = d_alpha
            inverse_ok = True
        else:
            d_alpha = f_divergence(P, Q, builtin("alpha", a)).value
            bridge = math.log1p(a * (a - 1.0) * d_alpha) / (a - 1.0)
            inverse_ok = ext_close(alpha_divergence_from_renyi(r, a), d_alpha, tol)
        half = f_divergence(P, Q, builtin("alpha", 0.5)).value
        hell = f_divergence(P, Q, builtin("H")).value
        passed = ext_close(r, bridge, tol) and ext_close(half, 2.0 * hell, tol) and inverse_ok
        return CheckOutcome(passed, {"renyi": to_json(r), "from_alpha": to_json(bridge),
                                     "d_half": half, "two_d_h": 2.0 * hell})


class MarkovSuite(PropertySuite):
    @property
    def name(self):
        return "markov"

    @property
    def description(self):
        return "a shared kernel Z | Y leaves D_f of (X, Y) unchanged on (X, Y, Z) and cannot raise it on (X, Z)"

    def generate_case(self, rng):
        J = random_joint(rng)
        J2 = random_joint(rng, J.shape)
        K = random_kernel(rng, J.y_labels, int(rng.integers(1, MAX_SUPPORT_SIZE + 1)))
        return {"f": random_generator_name(rng), "J": joint_to_json(J), "J2": joint_to_json(J2),
                "K": kernel_to_json(K)}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        J, J2 = joint_from_json(case["J"]), joint_from_json(case["J2"])
        K = kernel_from_json(case["K"])
        m = markov_invariance_check(J, J2, K, g)
        passed = ext_close(m.d_xyz, m.d_xy, tol) and ext_le(m.d_xz, m.d_xy, tol)
        return CheckOutcome(passed, {"d_xyz": to_json(m.d_xyz), "d_xy": to_json(m.d_xy),
                                     "d_xz": to_json(m.d_xz)})


def register_divergence_suites():
    for suite in (DpiSuite(), DpiEqualitySuite(), RenyiSuite(), MarkovSuite()):
        registry.register(suite)
