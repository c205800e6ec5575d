# Path from repo root: app/polyapprox/__init__.py
from app.polyapprox.chebyshev import (
    chebyshev_coeffs,
    chebyshev_eval,
    chebyshev_eval_closed,
    chebyshev_polynomial,
    coefficient_bound,
    literal_recurrence_eval,
)
from app.polyapprox.complexity import complexity_measures
from app.polyapprox.polynomial import Polynomial
from app.polyapprox.robust_fit import (
    degree_diagnostics,
    robust_fit_eval,
    robust_fit_eval_with_grad,
    robust_fit_spec,
)
from app.polyapprox.sign import (
    sign_poly_degree,
    sign_poly_eval,
    sign_poly_eval_decimal,
    sign_poly_eval_with_grad,
    sign_poly_terms_max,
)
from app.polyapprox.step import StepSpec, step_poly_eval, step_poly_eval_decimal, step_poly_eval_with_grad


__all__ = [
    "Polynomial",
    "StepSpec",
    "chebyshev_coeffs",
    "chebyshev_eval",
    "chebyshev_eval_closed",
    "chebyshev_polynomial",
    "coefficient_bound",
    "complexity_measures",
    "degree_diagnostics",
    "literal_recurrence_eval",
    "robust_fit_eval",
    "robust_fit_eval_with_grad",
    "robust_fit_spec",
    "sign_poly_degree",
    "sign_poly_eval",
    "sign_poly_eval_decimal",
    "sign_poly_eval_with_grad",
    "sign_poly_terms_max",
    "step_poly_eval",
    "step_poly_eval_decimal",
    "step_poly_eval_with_grad",
]
