# checks/copula_suites.py
# Copula suites: checkerboard, minimality, coarsening

import numpy as np

from checks.base import CheckOutcome, PropertySuite
from checks.cases import joint_from_json, joint_to_json, random_generator_name, random_joint
from checks.registry import registry
from config.settings import REFINEMENT_FACTOR, REFINEMENTS_PER_JOINT, TOL_ALGEBRAIC
from core.copulas import (
    checkerboard,
    grid_divergence,
    jensen_coarsening,
    minimality_check,
    random_refinement,
)
from core.csiszar import csiszar_index
from core.extreal import ext_close, to_json
from core.generators import from_cli_name

CHECKERBOARD_GENERATORS = ["kl", "tv", "hellinger", "pearson", "neyman", "lecam", "js", "alpha:0.3"]
MINIMALITY_GENERATORS = ["hellinger", "pearson"]


def _refinements(case):
    """Candidates re-derived from the stored seed so the case stays small"""
    C = checkerboard(joint_from_json(case["J"]))
    rng = np.random.default_rng(case["refine_seed"])
    return [random_refinement(C, case["k"], rng) for _ in range(case["count"])]


def _refinement_case(rng, names):
    return {"f": random_generator_name(rng, names),
            "J": joint_to_json(random_joint(rng)),
            "k": REFINEMENT_FACTOR,
            "count": REFINEMENTS_PER_JOINT,
            "refine_seed": int(rng.integers(2 ** 63))}


class CheckerboardSuite(PropertySuite):
    @property
    def name(self):
        return "checkerboard"

    @property
    def description(self):
        return "D_f(Pi || C_cb(J)) = S_f(J)"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        return {"f": random_generator_name(rng, CHECKERBOARD_GENERATORS),
                "J": joint_to_json(random_joint(rng))}

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        J = joint_from_json(case["J"])
        grid = grid_divergence(checkerboard(J), g)
        index = csiszar_index(J, g).value
        return CheckOutcome(ext_close(grid, index, tol), {"grid": to_json(grid), "csiszar": to_json(index)})


class MinimalitySuite(PropertySuite):
    @property
    def name(self):
        return "minimality"

    @property
    def description(self):
        return "no legal grid refinement has a smaller D_f(Pi || C) than the checkerboard"

    def generate_case(self, rng):
        return _refinement_case(rng, MINIMALITY_GENERATORS)

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        J = joint_from_json(case["J"])
        candidates = _refinements(case)
        floor = grid_divergence(checkerboard(J), g)
        values = [to_json(grid_divergence(c, g)) for c in candidates]
        return CheckOutcome(minimality_check(J, candidates, g, tol),
                            {"checkerboard": to_json(floor), "candidates": values})


class CoarseningSuite(PropertySuite):
    @property
    def name(self):
        return "coarsening"

    @property
    def description(self):
        return "averaging a refinement's density over the atom cells never increases D_f(Pi || C)"

    def generate_case(self, rng):
        return _refinement_case(rng, CHECKERBOARD_GENERATORS)

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        base = checkerboard(joint_from_json(case["J"]))
        pairs = []
        passed = True
        for cand in _refinements(case):
            fine, coarse, ok = jensen_coarsening(cand, base.u_breaks, base.v_breaks, g, tol)
            pairs.append([to_json(fine), to_json(coarse)])
            passed = passed and ok
        return CheckOutcome(passed, {"fine_coarse": pairs})


def register_copula_suites():
    for suite in (CheckerboardSuite(), MinimalitySuite(), CoarseningSuite()):
        registry.register(suite)
