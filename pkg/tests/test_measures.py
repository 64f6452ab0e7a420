# tests/test_measures.py

import numpy as np
import pytest

from core.errors import InputError, LabelMismatchError
from core.measures import (
    BOTH_POSITIVE,
    BOTH_ZERO,
    P_ONLY,
    Q_ONLY,
    DiscreteDistribution,
    JointDistribution,
    StochasticKernel,
    align,
    augment_independent,
    conditionals,
    distribution_from_json,
    distribution_to_json,
    flatten,
    is_fiber_constant,
    is_injective,
    joint_from_json,
    joint_pushforward,
    joint_to_json,
    marginals,
    markov_compose,
    markov_triple,
    product,
    pushforward_kernel,
    pushforward_map,
    reconstruct,
    transpose,
)


def test_small_drift_is_renormalized():
    P = DiscreteDistribution(("a", "b"), np.array([0.5, 0.5 + 5e-10]))
    assert P.masses.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("masses", [
    [0.5, 0.5 + 1e-6],
    [1.2, -0.2],
    [0.5, float("nan")],
    [],
])
def test_bad_masses_rejected(masses):
    labels = tuple(range(len(masses)))
    with pytest.raises(InputError):
        DiscreteDistribution(labels, np.array(masses))


def test_duplicate_labels_rejected():
    with pytest.raises(InputError):
        DiscreteDistribution(("a", "a"), np.array([0.5, 0.5]))
    with pytest.raises(InputError):
        JointDistribution((0, 0), (1,), np.array([[0.5], [0.5]]))


def test_masses_are_read_only():
    P = DiscreteDistribution.uniform([1, 2])
    with pytest.raises(ValueError):
        P.masses[0] = 1.0


def test_mass_lookup_and_support():
    P = DiscreteDistribution.from_dict({"a": 0.25, "b": 0.0, "c": 0.75})
    assert P.mass("c") == 0.75
    assert P.mass("zzz") == 0.0
    assert P.support() == ("a", "c")


def test_align_union_and_classes():
    P = DiscreteDistribution.from_dict({0: 0.5, 1: 0.5, 3: 0.0})
    Q = DiscreteDistribution.from_dict({1: 0.25, 2: 0.75, 3: 0.0})
    pair = align(P, Q)
    assert pair.labels == (0, 1, 2, 3)
    np.testing.assert_array_equal(pair.p, [0.5, 0.5, 0.0, 0.0])
    np.testing.assert_array_equal(pair.q, [0.0, 0.25, 0.75, 0.0])
    assert pair.classes == (P_ONLY, BOTH_POSITIVE, Q_ONLY, BOTH_ZERO)
    assert pair.singular_mass == 0.5
    assert not pair.mutually_singular
    assert pair.swapped().classes == (Q_ONLY, BOTH_POSITIVE, P_ONLY, BOTH_ZERO)


def test_align_mixed_label_types_is_deterministic():
    P = DiscreteDistribution.from_dict({"b": 0.5, 1: 0.5})
    Q = DiscreteDistribution.from_dict({1: 0.5, "b": 0.5})
    assert align(P, Q).labels == (1, "b")


def test_pushforward_map_merges_fibers():
    P = DiscreteDistribution.uniform([0, 1, 2, 3])
    image = pushforward_map(P, lambda x: x % 2)
    assert image.labels == (0, 1)
    np.testing.assert_allclose(image.masses, [0.5, 0.5])


def test_pushforward_map_from_table():
    P = DiscreteDistribution.from_dict({"a": 0.2, "b": 0.3, "c": 0.5})
    image = pushforward_map(P, {"a": "x", "b": "x", "c": "y"})
    assert image.as_dict() == pytest.approx({"x": 0.5, "y": 0.5})
    with pytest.raises(InputError):
        pushforward_map(P, {"a": "x"})


def test_pushforward_kernel():
    P = DiscreteDistribution.from_dict({0: 0.25, 1: 0.75})
    assert pushforward_kernel(P, StochasticKernel.identity([0, 1])) == P
    K = StochasticKernel((0, 1), ("u", "v"), np.array([[1.0, 0.0], [0.5, 0.5]]))
    out = pushforward_kernel(P, K)
    np.testing.assert_allclose(out.masses, [0.625, 0.375])


def test_pushforward_kernel_ignores_undefined_rows_off_support():
    P = DiscreteDistribution.from_dict({0: 1.0, 1: 0.0})
    K = StochasticKernel((0, 1), ("u",), np.array([[1.0], [0.0]]), usable=(True, False))
    assert pushforward_kernel(P, K).masses.tolist() == [1.0]


def test_conditionals_flag_zero_rows():
    J = JointDistribution((0, 1, 2), ("a", "b"), np.array([[0.2, 0.2], [0.0, 0.0], [0.3, 0.3]]))
    K = conditionals(J)
    assert K.usable == (True, False, True)
    np.testing.assert_allclose(K.rows[0], [0.5, 0.5])
    assert np.all(np.isnan(K.rows[1]))
    with pytest.raises(InputError):
        K.row(1)


def test_reconstruct_round_trip(rng):
    pmf = rng.dirichlet(np.ones(6)).reshape(2, 3)
    pmf[1, 0] = 0.0
    pmf /= pmf.sum()
    J = JointDistribution(("x0", "x1"), ("y0", "y1", "y2"), pmf)
    PX, _ = marginals(J)
    back = reconstruct(PX, conditionals(J))
    np.testing.assert_allclose(back.pmf, J.pmf, atol=1e-15)


def test_reconstruct_rejects_undefined_charged_row():
    PX = DiscreteDistribution.from_dict({0: 0.5, 1: 0.5})
    K = StochasticKernel((0, 1), ("a",), np.array([[1.0], [1.0]]), usable=(True, False))
    with pytest.raises(LabelMismatchError):
        reconstruct(PX, K)


def test_markov_compose_identity_and_constant():
    J = JointDistribution((0, 1), ("a", "b"), np.array([[0.125, 0.375], [0.25, 0.25]]))
    assert markov_compose(J, StochasticKernel.identity(("a", "b"))) == J
    row = DiscreteDistribution.from_dict({"z": 0.5, "w": 0.5})
    J_xz = markov_compose(J, StochasticKernel.constant(("a", "b"), row))
    np.testing.assert_allclose(J_xz.pmf, [[0.25, 0.25], [0.25, 0.25]])


def test_markov_compose_missing_row():
    J = JointDistribution((0,), ("a", "b"), np.array([[0.5, 0.5]]))
    K = StochasticKernel(("a",), ("z",), np.array([[1.0]]))
    with pytest.raises(LabelMismatchError):
        markov_compose(J, K)


def test_markov_triple_marginalizes_back():
    J = JointDistribution((0, 1), ("a", "b"), np.array([[0.125, 0.375], [0.25, 0.25]]))
    K = StochasticKernel(("a", "b"), ("z", "w"), np.array([[0.9, 0.1], [0.2, 0.8]]))
    triple = markov_triple(J, K)
    assert len(triple) == 8
    assert triple.labels[0] == (0, "a", "z")
    xy = pushforward_map(triple, lambda t: (t[0], t[1]))
    np.testing.assert_allclose(xy.masses, flatten(J).masses, atol=1e-15)


def test_rows_for_unknown_label():
    K = StochasticKernel.identity(["a", "b"])
    with pytest.raises(LabelMismatchError):
        K.rows_for(["c"])


def test_product_transpose_flatten():
    PX = DiscreteDistribution.bernoulli(0.25)
    PY = DiscreteDistribution.uniform(["a", "b"])
    J = product(PX, PY)
    np.testing.assert_allclose(J.pmf, [[0.375, 0.375], [0.125, 0.125]])
    assert transpose(J).shape == (2, 2)
    assert transpose(J).x_labels == ("a", "b")
    assert flatten(J).labels == ((0, "a"), (0, "b"), (1, "a"), (1, "b"))


def test_joint_pushforward_sums_cells():
    J = JointDistribution((0, 1, 2), ("a", "b"), np.array([[0.1, 0.2], [0.3, 0.1], [0.2, 0.1]]))
    out = joint_pushforward(J, lambda x: min(x, 1), {"a": "k", "b": "k"})
    assert out.x_labels == (0, 1)
    assert out.y_labels == ("k",)
    np.testing.assert_allclose(out.pmf, [[0.3], [0.7]])


def test_augment_independent():
    J = JointDistribution((0, 1), ("a",), np.array([[0.4], [0.6]]))
    PU = DiscreteDistribution.bernoulli(0.5)
    aug = augment_independent(J, PU)
    assert aug.x_labels == ((0, 0), (0, 1), (1, 0), (1, 1))
    np.testing.assert_allclose(aug.pmf.ravel(), [0.2, 0.2, 0.3, 0.3])


def test_is_injective():
    assert is_injective(lambda x: 2 * x, [0, 1, 2])
    assert not is_injective(lambda x: x % 2, [0, 1, 2])


def test_is_fiber_constant():
    P = DiscreteDistribution.from_dict({0: 0.2, 1: 0.2, 2: 0.6})
    Q = DiscreteDistribution.from_dict({0: 0.1, 1: 0.1, 2: 0.8})
    assert is_fiber_constant(P, Q, lambda x: int(x >= 2))
    assert not is_fiber_constant(P, Q, lambda x: 0)
    R = DiscreteDistribution.from_dict({0: 0.2, 1: 0.0, 2: 0.8})
    assert not is_fiber_constant(P, R, lambda x: int(x >= 2))


def test_json_codecs():
    P = distribution_from_json({"atoms": [{"label": "a", "p": 0.25}, {"label": "b", "p": 0.75}]})
    assert distribution_to_json(P) == {"atoms": [{"label": "a", "p": 0.25}, {"label": "b", "p": 0.75}]}
    with pytest.raises(InputError):
        distribution_from_json({"atoms": [{"label": "a"}]})
    J = joint_from_json({"x": [0, 1], "y": ["a"], "pmf": [[0.5], [0.5]]})
    assert joint_to_json(J) == {"x": [0, 1], "y": ["a"], "pmf": [[0.5], [0.5]]}
    assert joint_to_json(augment_independent(J, DiscreteDistribution.point_mass("u")))["x"] == ["0|u", "1|u"]


@pytest.mark.parametrize("data", [
    {"atoms": [{"label": {"a": 1}, "p": 1.0}]},
    {"atoms": [{"label": [0], "p": 0.5}, {"label": [1], "p": 0.5}]},
    {"atoms": [{"label": None, "p": 1.0}]},
    {"atoms": [{"label": True, "p": 1.0}]},
])
def test_distribution_labels_must_be_strings_or_numbers(data):
    with pytest.raises(InputError):
        distribution_from_json(data)


def test_joint_labels_must_be_strings_or_numbers():
    with pytest.raises(InputError):
        joint_from_json({"x": [[0], [1]], "y": ["a"], "pmf": [[0.5], [0.5]]})
    with pytest.raises(InputError):
        joint_from_json({"x": [0, 1], "y": [{"b": 2}], "pmf": [[0.5], [0.5]]})


def test_unhashable_labels_rejected():
    with pytest.raises(InputError):
        DiscreteDistribution(([0], [1]), np.array([0.5, 0.5]))
