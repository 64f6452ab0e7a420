# tests/test_copulas.py

import math

import numpy as np
import pytest

from config.settings import FGM_GRID_SIZE
from core.copulas import (
    FgmCopula,
    GridCopula,
    RandomizationScheme,
    StepCdf,
    checkerboard,
    fgm_divergence_quadrature,
    fgm_fit_bernoulli,
    fgm_grid,
    generalized_inverse,
    grid_divergence,
    interpolating_cdf,
    jensen_coarsening,
    minimality_check,
    random_refinement,
)
from core.csiszar import csiszar_index
from core.errors import ConstraintError, InputError, InvalidCandidateError
from core.generators import builtin, from_cli_name
from core.measures import DiscreteDistribution, JointDistribution, product
from core.special import fgm_pearson_closed_form

PEARSON = builtin("P")
FGM_PEARSON_AT_ONE = math.pi ** 2 / 8 - 1


def test_step_cdf_and_generalized_inverse():
    F = StepCdf.from_distribution(DiscreteDistribution.from_dict({0: 0.25, 1: 0.0, 2: 0.75}))
    assert F.breakpoints == (0, 2)
    assert F(-1) == 0.0
    assert F(0) == 0.25
    assert F(1) == 0.25
    assert F(5) == 1.0
    assert generalized_inverse(F, 0.0) == -math.inf
    assert generalized_inverse(F, 0.1) == 0
    assert generalized_inverse(F, 0.25) == 0
    assert generalized_inverse(F, 0.26) == 2
    assert generalized_inverse(F, 1.0) == 2
    with pytest.raises(InputError):
        generalized_inverse(F, 1.5)


def test_checkerboard_of_bernoulli_example(bernoulli_example):
    C = checkerboard(bernoulli_example)
    np.testing.assert_allclose(C.density(), [[1.25, 0.75], [0.75, 1.25]], rtol=0, atol=1e-15)
    np.testing.assert_array_equal(C.u_breaks, [0.0, 0.5, 1.0])
    assert grid_divergence(C, PEARSON) == pytest.approx(1 / 15, abs=1e-12)


@pytest.mark.parametrize("cli", ["kl", "kl-star", "hellinger", "pearson", "neyman", "alpha:0.3", "js"])
def test_grid_divergence_equals_csiszar_index(cli, rng):
    g = from_cli_name(cli)
    for _ in range(5):
        pmf = rng.dirichlet(np.ones(12)).reshape(3, 4)
        J = JointDistribution((0, 1, 2), ("a", "b", "c", "d"), pmf)
        assert grid_divergence(checkerboard(J), g) == pytest.approx(csiszar_index(J, g).value, rel=1e-12)


def test_checkerboard_of_product_is_independence():
    J = product(DiscreteDistribution.from_dict({0: 0.5, 1: 0.5}),
                DiscreteDistribution.from_dict({0: 0.25, 1: 0.75}))
    C = checkerboard(J)
    np.testing.assert_allclose(C.density(), 1.0, atol=1e-15)
    np.testing.assert_array_equal(C.cell_mass, GridCopula.independence([0.5, 0.5], [0.25, 0.75]).cell_mass)
    assert grid_divergence(C, PEARSON) == pytest.approx(0.0, abs=1e-15)


def test_checkerboard_single_atom():
    C = checkerboard(JointDistribution(("x",), ("y",), np.array([[1.0]])))
    assert C.shape == (1, 1)
    assert C.cdf(0.3, 0.6) == pytest.approx(0.18)
    assert grid_divergence(C, builtin("KL")) == 0.0


def test_checkerboard_drops_zero_atoms():
    J = JointDistribution((0, 1, 2), ("a", "b", "c"),
                          np.array([[0.25, 0.0, 0.25], [0.0, 0.0, 0.0], [0.125, 0.0, 0.375]]))
    C = checkerboard(J)
    assert C.shape == (2, 2)
    np.testing.assert_array_equal(C.u_widths, [0.5, 0.5])
    np.testing.assert_array_equal(C.v_widths, [0.375, 0.625])


def test_invalid_grid_copula():
    with pytest.raises(InputError):
        GridCopula([0.5, 0.5], [0.5, 0.5], [[0.5, 0.0], [0.25, 0.25]])
    with pytest.raises(InputError):
        GridCopula([0.5, 0.5], [1.0], [[0.25, 0.25], [0.25, 0.25]])
    with pytest.raises(InputError):
        GridCopula([1.0, 0.0], [1.0], [[1.0], [0.0]])


def test_grid_cdf_at_breaks(bernoulli_example):
    C = checkerboard(bernoulli_example)
    assert C.cdf(0.5, 0.5) == pytest.approx(5 / 16)
    assert C.cdf(1.0, 1.0) == pytest.approx(1.0)
    assert C.cdf(0.0, 0.7) == 0.0
    assert C.cdf(0.75, 0.75) == pytest.approx(0.578125)
    # uniform margins
    assert C.cdf(0.3, 1.0) == pytest.approx(0.3)


def test_to_frame(bernoulli_example):
    frame = checkerboard(bernoulli_example).to_frame()
    assert list(frame.columns) == ["i", "j", "u_lo", "u_hi", "v_lo", "v_hi", "mass", "density"]
    assert len(frame) == 4
    assert frame["mass"].sum() == pytest.approx(1.0)
    assert frame.loc[3, "density"] == pytest.approx(1.25)


def test_interpolating_cdf_schemes(bernoulli_example):
    J = bernoulli_example
    shared = RandomizationScheme("shared")
    anti = RandomizationScheme("antithetic")
    assert interpolating_cdf(J, shared, 0.75, 0.75) == pytest.approx(0.578125)
    assert interpolating_cdf(J, RandomizationScheme("independent"), 0.75, 0.75) == pytest.approx(0.578125)
    assert interpolating_cdf(J, anti, 0.25, 0.25) == 0.0
    assert interpolating_cdf(J, anti, 0.75, 0.75) == pytest.approx(0.5)
    for t in [0.1, 0.5, 0.9]:
        assert interpolating_cdf(J, anti, t, 1.0) == pytest.approx(t)
        assert interpolating_cdf(J, anti, 1.0, t) == pytest.approx(t)
    # the cell masses at the atom grid agree across schemes
    assert interpolating_cdf(J, anti, 0.5, 0.5) == pytest.approx(5 / 16)


def test_unknown_scheme():
    with pytest.raises(InputError):
        RandomizationScheme("mixed")


def test_coarsen_refinement_back(bernoulli_example, rng):
    C = checkerboard(bernoulli_example)
    fine = random_refinement(C, 3, rng)
    assert fine.shape == (6, 6)
    back = fine.coarsen(C.u_breaks, C.v_breaks)
    np.testing.assert_allclose(back.cell_mass, C.cell_mass, atol=1e-12)
    with pytest.raises(InvalidCandidateError):
        fine.coarsen([0.0, 0.4, 1.0], C.v_breaks)


def test_random_refinement_masses_nonnegative(rng):
    pmf = rng.dirichlet(np.ones(6)).reshape(2, 3)
    C = checkerboard(JointDistribution((0, 1), (0, 1, 2), pmf))
    for _ in range(20):
        fine = random_refinement(C, 4, rng)
        assert np.all(fine.cell_mass >= 0)
        assert grid_divergence(fine, PEARSON) >= grid_divergence(C, PEARSON) - 1e-12
    with pytest.raises(InputError):
        random_refinement(C, 0, rng)


def test_jensen_coarsening(rng):
    fine = fgm_grid(0.8, 8)
    coarse_breaks = [0.0, 0.25, 0.5, 1.0]
    f, c, ok = jensen_coarsening(fine, coarse_breaks, coarse_breaks, builtin("H"))
    assert ok
    assert c <= f


def test_fgm_fit_bernoulli():
    assert fgm_fit_bernoulli(0.5, 0.5, 5 / 16).theta == pytest.approx(1.0)
    assert fgm_fit_bernoulli(0.5, 0.5, 0.25).theta == 0.0
    with pytest.raises(ConstraintError):
        fgm_fit_bernoulli(0.5, 0.5, 3 / 8)
    with pytest.raises(ConstraintError):
        fgm_fit_bernoulli(0.5, 0.5, 0.5)
    with pytest.raises(ConstraintError):
        fgm_fit_bernoulli(1.0, 0.5, 0.25)


def test_fgm_parameter_range():
    with pytest.raises(ConstraintError):
        FgmCopula(1.5)
    FgmCopula(-1.0)


@pytest.mark.parametrize("theta", [-1.0, -0.4, 0.3, 1.0])
def test_fgm_density_is_mixed_derivative(theta):
    C = FgmCopula(theta)
    h = 1e-3
    for u, v in [(0.2, 0.7), (0.5, 0.5), (0.9, 0.1)]:
        numeric = (C.cdf(u + h, v + h) - C.cdf(u + h, v - h)
                   - C.cdf(u - h, v + h) + C.cdf(u - h, v - h)) / (4 * h * h)
        assert C.density(u, v) == pytest.approx(numeric, abs=1e-8)


def test_fgm_density_nonnegative_at_corners():
    C = FgmCopula(1.0)
    assert C.density(0.0, 1.0) == 0.0
    assert C.density(1.0, 0.0) == 0.0
    assert C.density(0.0, 0.0) == 2.0


@pytest.mark.parametrize("theta", [0.25, 0.5, 0.75, 1.0])
def test_fgm_quadrature_matches_closed_form(theta):
    result = fgm_divergence_quadrature(FgmCopula(theta), PEARSON, 128)
    assert result.value == pytest.approx(fgm_pearson_closed_form(theta), abs=1e-6)
    assert result.converged
    assert result.difference <= 1e-5


def test_fgm_quadrature_even_in_theta():
    a = fgm_divergence_quadrature(FgmCopula(-0.6), PEARSON).value
    b = fgm_divergence_quadrature(FgmCopula(0.6), PEARSON).value
    assert a == pytest.approx(b, abs=1e-9)


def test_fgm_quadrature_edge_cases():
    zero = fgm_divergence_quadrature(FgmCopula(0.0), builtin("KL"))
    assert zero.value == 0.0
    assert zero.converged
    with pytest.raises(InputError):
        fgm_divergence_quadrature(FgmCopula(0.5), PEARSON, 8)


def test_bernoulli_example_is_strictly_below_fgm():
    assert 1 / 15 < FGM_PEARSON_AT_ONE
    assert fgm_pearson_closed_form(1.0) == pytest.approx(FGM_PEARSON_AT_ONE, abs=1e-12)


def test_fgm_grid_is_a_valid_candidate(bernoulli_example):
    candidate = fgm_grid(1.0)
    assert candidate.shape == (FGM_GRID_SIZE, FGM_GRID_SIZE)
    assert minimality_check(bernoulli_example, [candidate], PEARSON)
    value = grid_divergence(candidate, PEARSON)
    assert 1 / 15 < value < FGM_PEARSON_AT_ONE


def test_minimality_rejects_invalid_candidates(bernoulli_example):
    with pytest.raises(InvalidCandidateError):
        minimality_check(bernoulli_example, [fgm_grid(1.0, 3)], PEARSON)
    with pytest.raises(InvalidCandidateError):
        minimality_check(bernoulli_example, [fgm_grid(0.5, 64)], PEARSON)


def test_minimality_over_refinements(rng):
    for _ in range(10):
        pmf = rng.dirichlet(np.ones(6)).reshape(3, 2)
        J = JointDistribution((0, 1, 2), (0, 1), pmf)
        C = checkerboard(J)
        candidates = [random_refinement(C, 3, rng) for _ in range(5)]
        for cli in ["hellinger", "pearson", "kl-star"]:
            assert minimality_check(J, candidates, from_cli_name(cli))
