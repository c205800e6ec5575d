# Path from repo root: tests/test_polyapprox.py
from __future__ import annotations

import math
from fractions import Fraction

import hypothesis.strategies as hys
import numpy as np
import pytest
from hypothesis import given, settings

from app.core.errors import ConfigError, SeparabilityError
from app.data.dataset import Dataset, generate_dataset
from app.polyapprox import (
    Polynomial,
    StepSpec,
    chebyshev_coeffs,
    chebyshev_eval,
    chebyshev_eval_closed,
    chebyshev_polynomial,
    coefficient_bound,
    complexity_measures,
    degree_diagnostics,
    literal_recurrence_eval,
    robust_fit_eval,
    robust_fit_eval_with_grad,
    robust_fit_spec,
    sign_poly_degree,
    sign_poly_eval,
    sign_poly_eval_decimal,
    sign_poly_eval_with_grad,
    sign_poly_terms_max,
    step_poly_eval,
    step_poly_eval_with_grad,
)


# ---------------------------
# Sign polynomial
# ---------------------------
@pytest.mark.parametrize("eta,eps1", [(0.1, 0.1), (0.2, 0.01), (0.05, 0.2)])
def test_sign_polynomial_contract(eta, eps1):
    k = sign_poly_degree(eta, eps1)
    xs = np.linspace(-1.0, 1.0, 10_001)
    p = sign_poly_eval(xs, k)
    assert np.all(np.abs(p) <= 1.0 + 1e-12)
    outside = np.abs(xs) >= eta
    assert np.max(np.abs(p[outside] - np.sign(xs[outside]))) <= eps1 / 2
    assert sign_poly_terms_max(xs, k) <= 1.0


def test_sign_polynomial_is_odd_and_zero_at_zero():
    k = 40
    xs = np.linspace(0.0, 1.0, 101)
    np.testing.assert_array_equal(sign_poly_eval(-xs, k), -sign_poly_eval(xs, k))
    assert sign_poly_eval(0.0, k) == 0.0
    assert sign_poly_eval(1.0, k) == 1.0


def test_sign_polynomial_derivative_matches_finite_difference():
    k = 25
    for x in (-0.7, -0.2, 0.05, 0.4, 0.9):
        h = 1e-6
        _, grad = sign_poly_eval_with_grad(x, k)
        fd = (sign_poly_eval(x + h, k) - sign_poly_eval(x - h, k)) / (2 * h)
        assert grad == pytest.approx(fd, rel=1e-5, abs=1e-6)


def test_sign_polynomial_decimal_agrees_with_float():
    for x in (-0.9, -0.1, 0.3, 0.75):
        assert float(sign_poly_eval_decimal(x, 60)) == pytest.approx(sign_poly_eval(x, 60), abs=1e-13)


def test_sign_degree_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        sign_poly_degree(0.0, 0.1)
    with pytest.raises(ConfigError):
        sign_poly_degree(0.1, 1.0)
    with pytest.raises(ConfigError):
        sign_poly_eval(0.5, -1)


# ---------------------------
# Step polynomial
# ---------------------------
@pytest.mark.parametrize("eps_sep,rho,eps1", [(1.0, 0.1, 0.05), (0.8, 0.0, 0.1), (1.5, 0.3, 0.02)])
def test_step_polynomial_contract(eps_sep, rho, eps1):
    spec = StepSpec(eps1=eps1, eps_sep=eps_sep, rho=rho)
    low = np.linspace(-1.0, spec.low_end, 2000, endpoint=False)
    high = np.linspace(spec.high_start, 1.0, 2000)
    assert np.max(np.abs(step_poly_eval(low, spec))) <= eps1
    assert np.max(np.abs(step_poly_eval(high, spec) - 1.0)) <= eps1
    mid = np.linspace(-1.0, 1.0, 501)
    assert np.all((step_poly_eval(mid, spec) >= -1e-12) & (step_poly_eval(mid, spec) <= 1.0 + 1e-12))


def test_step_gradient_matches_finite_difference():
    spec = StepSpec(eps1=0.1, eps_sep=1.0, rho=0.1)
    for z in (0.3, 0.8, 0.95):
        h = 1e-6
        _, grad = step_poly_eval_with_grad(z, spec)
        fd = (step_poly_eval(z + h, spec) - step_poly_eval(z - h, spec)) / (2 * h)
        assert grad == pytest.approx(fd, rel=1e-5, abs=1e-6)


def test_step_spec_validation():
    with pytest.raises(ValueError):
        StepSpec(eps1=0.1, eps_sep=0.2, rho=0.1)
    with pytest.raises(ValueError):
        StepSpec(eps1=1.5, eps_sep=1.0)


# ---------------------------
# Chebyshev
# ---------------------------
def test_chebyshev_known_values():
    assert chebyshev_coeffs(0) == (1,)
    assert chebyshev_coeffs(2) == (-1, 0, 2)
    assert chebyshev_coeffs(3) == (0, -3, 0, 4)
    assert chebyshev_polynomial(4)(Fraction(1, 2)) == Fraction(-1, 2)


@given(k=hys.integers(min_value=0, max_value=20))
def test_chebyshev_coefficient_bound(k):
    assert chebyshev_polynomial(k).max_abs_coeff() <= coefficient_bound(k)


@settings(max_examples=50)
@given(k=hys.integers(min_value=0, max_value=30), theta=hys.floats(min_value=0.0, max_value=math.pi))
def test_chebyshev_cosine_identity(k, theta):
    assert chebyshev_eval(k, math.cos(theta)) == pytest.approx(math.cos(k * theta), abs=1e-9)


def test_closed_form_equals_recurrence():
    xs = np.linspace(-1.0, 1.0, 41)
    for k in range(12):
        np.testing.assert_allclose(chebyshev_eval_closed(k, xs), chebyshev_eval(k, xs), atol=1e-9)


def test_literal_recurrence_differs_from_k_two():
    assert literal_recurrence_eval(1, 0.3) == chebyshev_eval(1, 0.3)
    assert literal_recurrence_eval(2, 0.3) != pytest.approx(chebyshev_eval(2, 0.3))


# ---------------------------
# Complexity measures
# ---------------------------
def test_complexity_of_a_monomial():
    plain, weighted = complexity_measures(Polynomial.monomial(2, 3), eps1=math.exp(-4.0))
    assert plain == pytest.approx(3 * 3**1.75)
    assert weighted == pytest.approx(3 * (1 + math.sqrt(4.0 / 2) ** 2))


def test_complexity_of_a_constant_and_zero():
    assert complexity_measures([5.0], eps1=0.5, c=2.0) == (pytest.approx(10.0), pytest.approx(10.0))
    assert complexity_measures(Polynomial(), eps1=0.5) == (0.0, 0.0)
    with pytest.raises(ConfigError):
        complexity_measures([1.0], eps1=0.5, c=0.5)


# ---------------------------
# Robust-fit target
# ---------------------------
def test_robust_fit_hits_labels_near_training_points():
    ds = generate_dataset(4, 6, 0.9, 0.1, "smooth", seed=3)
    eps = 0.3
    for x, y in zip(ds.xs, ds.ys):
        assert abs(robust_fit_eval(ds, x, eps) - y) <= eps / 3 + 1e-9


def test_robust_fit_gradient_matches_finite_difference():
    ds = generate_dataset(3, 4, 0.9, 0.1, "smooth", seed=5)
    rng = np.random.default_rng(0)
    x = ds.xs[0] + rng.normal(0.0, 0.05, size=4)
    _, grad = robust_fit_eval_with_grad(ds, x, 0.3)
    h = 1e-6
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        fd = (robust_fit_eval(ds, x + e, 0.3) - robust_fit_eval(ds, x - e, 0.3)) / (2 * h)
        assert grad[j] == pytest.approx(fd, rel=1e-4, abs=1e-5)


def test_robust_fit_requires_separability():
    ds = generate_dataset(3, 4, 0.5, 0.0, "sign", seed=1)
    crowded = Dataset(n=ds.n, d=ds.d, xs=ds.xs, ys=ds.ys, eps_sep=0.5, rho=0.3, min_distance=ds.min_distance)
    with pytest.raises(SeparabilityError):
        robust_fit_spec(crowded, 0.1)


def test_degree_diagnostics_reports_both_formulas():
    spec = StepSpec(eps1=0.01, eps_sep=1.0, rho=0.1)
    out = degree_diagnostics(0.8, 4, 0.1, 0.01, spec)
    assert out["M_fit"] == pytest.approx(24 / 0.8 * math.log(48 * 4 / 0.1))
    assert out["M_step"] == pytest.approx(24 * math.log(1600) / 0.8)
    assert out["k"] == spec.k
