# tests/test_special.py

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import spence

from core.errors import InputError
from core.quadrature import graded_rule, integrate_unit_square
from core.special import dilog, fgm_pearson_closed_form


def test_dilog_constants():
    assert dilog(0.0) == 0.0
    assert dilog(1.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert dilog(-1.0) == pytest.approx(-math.pi ** 2 / 12, rel=1e-15)
    assert dilog(0.5) == pytest.approx(math.pi ** 2 / 12 - math.log(2.0) ** 2 / 2, rel=1e-14)


@settings(max_examples=300, deadline=None)
@given(x=st.floats(min_value=-1.0, max_value=1.0))
def test_dilog_matches_scipy(x):
    assert dilog(x) == pytest.approx(float(spence(1.0 - x)), rel=1e-13, abs=1e-15)


def test_dilog_domain():
    with pytest.raises(InputError):
        dilog(1.5)
    with pytest.raises(InputError):
        dilog(-1.0001)


def test_pearson_closed_form_at_one():
    assert fgm_pearson_closed_form(1.0) == pytest.approx(math.pi ** 2 / 8 - 1, abs=1e-12)


@pytest.mark.parametrize("theta", [0.3, 0.5, 0.5000001, 0.75])
def test_pearson_closed_form_branches_agree(theta):
    direct = (spence(1.0 - theta) - spence(1.0 + theta)) / (2.0 * theta) - 1.0
    assert fgm_pearson_closed_form(theta) == pytest.approx(float(direct), rel=1e-10)


def test_pearson_closed_form_small_theta():
    theta = 1e-4
    assert fgm_pearson_closed_form(theta) == pytest.approx(theta ** 2 / 9, rel=1e-6)
    assert fgm_pearson_closed_form(0.0) == 0.0


@pytest.mark.parametrize("theta", [0.2, 0.6, 1.0])
def test_pearson_closed_form_is_even(theta):
    assert fgm_pearson_closed_form(-theta) == pytest.approx(fgm_pearson_closed_form(theta), rel=1e-14)


def test_pearson_closed_form_domain():
    with pytest.raises(InputError):
        fgm_pearson_closed_form(1.01)


def test_graded_rule_weights_sum_to_one():
    rule = graded_rule(64)
    assert rule.weights.sum() == pytest.approx(1.0, rel=1e-13)
    np.testing.assert_allclose(rule.nodes + rule.complements, 1.0, rtol=0, atol=1e-15)
    assert np.all(np.diff(rule.nodes) > 0)
    with pytest.raises(ValueError):
        rule.weights[0] = 0.0


def test_graded_rule_rejects_bad_arguments():
    with pytest.raises(InputError):
        graded_rule(0)
    with pytest.raises(InputError):
        graded_rule(8, grading=0)


def test_integrate_unit_square_polynomials():
    assert integrate_unit_square(lambda u, uc, v, vc: np.ones_like(u), 64) == pytest.approx(1.0, rel=1e-13)
    assert integrate_unit_square(lambda u, uc, v, vc: u * v, 64) == pytest.approx(0.25, rel=1e-12)
    assert integrate_unit_square(lambda u, uc, v, vc: uc * v ** 2, 16, grading=1) == pytest.approx(1 / 6, rel=1e-13)


def test_integrate_handles_log_singularity():
    # int_0^1 int_0^1 -log(u) du dv = 1
    assert integrate_unit_square(lambda u, uc, v, vc: -np.log(u), 64) == pytest.approx(1.0, abs=1e-6)
