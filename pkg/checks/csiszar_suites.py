# checks/csiszar_suites.py
# Csiszar index suites: mi, conditional, symmetry, transform, chain, augmentation

from checks.base import CheckOutcome, PropertySuite
from checks.cases import (
    dist_to_json,
    dist_from_json,
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
)
from checks.registry import registry
from config.settings import (
    INDEPENDENCE_CELL_TOL,
    INDEPENDENCE_VALUE_TOL,
    MAX_SUPPORT_SIZE,
    NEAR_COPY_GAP,
    TOL_ALGEBRAIC,
)
from core.csiszar import (
    csiszar_index,
    independence_gap,
    independent_augmentation_check,
    markov_chain_monotonicity,
    mutual_information,
    product_masses,
    transform_reduces,
)
from core.extreal import ext_close, to_json
from core.generators import builtin, from_cli_name
from core.measures import JointDistribution, transpose


def _joint_case(rng):
    J = random_joint(rng)
    return {"f": random_generator_name(rng), "J": joint_to_json(J)}


class MutualInformationSuite(PropertySuite):
    @property
    def name(self):
        return "mi"

    @property
    def description(self):
        return "S_KL* = H(X) + H(Y) - H(X, Y)"

    def generate_case(self, rng):
        return {"J": joint_to_json(random_joint(rng))}

    def check_case(self, case, tol):
        J = joint_from_json(case["J"])
        s = csiszar_index(J, builtin("KL*")).value
        mi = mutual_information(J)
        return CheckOutcome(ext_close(s, mi, tol), {"s_kl_star": to_json(s), "mutual_information": mi})


class ConditionalSuite(PropertySuite):
    @property
    def name(self):
        return "conditional"

    @property
    def description(self):
        return "S_f = sum_x P_X(x) D_f(P_Y || P_{Y|X=x})"

    def generate_case(self, rng):
        return _joint_case(rng)

    def check_case(self, case, tol):
        r = csiszar_index(joint_from_json(case["J"]), from_cli_name(case["f"]))
        return CheckOutcome(ext_close(r.via_joint, r.via_conditionals, tol),
                            {"via_joint": to_json(r.via_joint), "via_conditionals": to_json(r.via_conditionals)})


class SymmetrySuite(PropertySuite):
    @property
    def name(self):
        return "symmetry"

    @property
    def description(self):
        return "S_f(X, Y) = S_f(Y, X), S_f >= 0, and S_f = 0 iff X and Y are independent"

    @property
    def default_tol(self):
        return TOL_ALGEBRAIC

    def generate_case(self, rng):
        case = _joint_case(rng)
        J = joint_from_json(case["J"])
        # same marginals, within NEAR_COPY_GAP of independence
        lam = float(rng.uniform(0.0, NEAR_COPY_GAP))
        near = JointDistribution(J.x_labels, J.y_labels, (1.0 - lam) * product_masses(J) + lam * J.pmf)
        case["J_near"] = joint_to_json(near)
        return case

    def check_case(self, case, tol):
        g = from_cli_name(case["f"])
        J = joint_from_json(case["J"])
        near = joint_from_json(case["J_near"])
        s_xy = csiszar_index(J, g).value
        s_yx = csiszar_index(transpose(J), g).value
        s_near = csiszar_index(near, g).value
        zero_iff_independent = ((s_xy <= INDEPENDENCE_VALUE_TOL) == (independence_gap(J) <= INDEPENDENCE_CELL_TOL)
                                and s_near <= INDEPENDENCE_VALUE_TOL
                                and independence_gap(near) <= INDEPENDENCE_CELL_TOL)
        passed = ext_close(s_xy, s_yx, tol) and s_xy >= -tol and zero_iff_independent
        return CheckOutcome(passed, {"s_xy": to_json(s_xy), "s_yx": to_json(s_yx), "s_near": to_json(s_near),
                                     "gap": independence_gap(J)})


class TransformSuite(PropertySuite):
    @property
    def name(self):
        return "transform"

    @property
    def description(self):
        return "S_f(phi(X), psi(Y)) <= S_f(X, Y)"

    def generate_case(self, rng):
        case = _joint_case(rng)
        J = joint_from_json(case["J"])
        case["phi_x"] = map_to_json(random_map(rng, J.x_labels))
        case["phi_y"] = map_to_json(random_map(rng, J.y_labels))
        return case

    def check_case(self, case, tol):
        r = transform_reduces(joint_from_json(case["J"]), map_from_json(case["phi_x"]),
                              map_from_json(case["phi_y"]), from_cli_name(case["f"]), tol)
        return CheckOutcome(r.holds, {"before": to_json(r.before), "after": to_json(r.after)})


class ChainSuite(PropertySuite):
    @property
    def name(self):
        return "chain"

    @property
    def description(self):
        return "S_f(X, Z) <= S_f(X, Y) along X - Y - Z"

    def generate_case(self, rng):
        case = _joint_case(rng)
        J = joint_from_json(case["J"])
        K = random_kernel(rng, J.y_labels, int(rng.integers(1, MAX_SUPPORT_SIZE + 1)))
        case["K"] = kernel_to_json(K)
        return case

    def check_case(self, case, tol):
        r = markov_chain_monotonicity(joint_from_json(case["J"]), kernel_from_json(case["K"]),
                                      from_cli_name(case["f"]), tol)
        return CheckOutcome(r.holds, {"s_xy": to_json(r.s_xy), "s_xz": to_json(r.s_xz)})


class AugmentationSuite(PropertySuite):
    @property
    def name(self):
        return "augmentation"

    @property
    def description(self):
        return "S_f((X, U), Y) = S_f(X, Y) for U independent of (X, Y)"

    def generate_case(self, rng):
        case = _joint_case(rng)
        case["PU"] = dist_to_json(random_distribution(rng))
        return case

    def check_case(self, case, tol):
        r = independent_augmentation_check(joint_from_json(case["J"]), dist_from_json(case["PU"]),
                                           from_cli_name(case["f"]), tol)
        return CheckOutcome(r.holds_equal, {"s_base": to_json(r.s_base), "s_aug": to_json(r.s_aug)})


def register_csiszar_suites():
    for suite in (MutualInformationSuite(), ConditionalSuite(), SymmetrySuite(), TransformSuite(),
                  ChainSuite(), AugmentationSuite()):
        registry.register(suite)
