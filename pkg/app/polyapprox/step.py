# Path from repo root: app/polyapprox/step.py
"""
Step polynomial q(z): close to 0 for z < 1 - (eps_sep - rho)^2 / 2 and close to 1 for
z >= 1 - rho^2 / 2.

    eta   = (eps_sep - 2 rho) * eps_sep / 8
    alpha = 1 - rho^2 / 2 - 2 eta
    q(z)  = (p_k((z - alpha) / 2) + 1) / 2,    k = sign_poly_degree(eta, eps1)

alpha is the midpoint of the gap between the two intervals, whose half-width is 2 eta,
so after halving the argument the sign polynomial sees margin eta, and every z in
[-1, 1] maps into [-1, 1].
"""
from __future__ import annotations

from decimal import Decimal, localcontext

from pydantic import BaseModel, computed_field, model_validator

from app.polyapprox.sign import (
    sign_poly_degree,
    sign_poly_eval,
    sign_poly_eval_decimal,
    sign_poly_eval_with_grad,
)


class StepSpec(BaseModel):
    eps1: float
    eps_sep: float
    rho: float = 0.0

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check(self) -> StepSpec:
        if not 0.0 < self.eps1 < 1.0:
            raise ValueError(f"eps1 must lie in (0, 1), got {self.eps1}")
        if self.rho < 0.0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        if not self.eps_sep > 2.0 * self.rho:
            raise ValueError(f"need eps_sep > 2*rho, got eps_sep={self.eps_sep}, rho={self.rho}")
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"margin eta={self.eta} must lie in (0, 1)")
        return self

    @computed_field
    @property
    def eta(self) -> float:
        return (self.eps_sep - 2.0 * self.rho) * self.eps_sep / 8.0

    @computed_field
    @property
    def alpha(self) -> float:
        return 1.0 - self.rho * self.rho / 2.0 - 2.0 * self.eta

    @computed_field
    @property
    def k(self) -> int:
        return sign_poly_degree(self.eta, self.eps1)

    @property
    def low_end(self) -> float:
        """q is within eps1 of 0 strictly below this point."""
        return 1.0 - (self.eps_sep - self.rho) ** 2 / 2.0

    @property
    def high_start(self) -> float:
        """q is within eps1 of 1 from this point on."""
        return 1.0 - self.rho * self.rho / 2.0


def step_poly_eval(z, spec: StepSpec):
    u = (z - spec.alpha) / 2.0
    return (sign_poly_eval(u, spec.k) + 1.0) / 2.0


def step_poly_eval_with_grad(z, spec: StepSpec):
    """(q(z), q'(z)); q' = p_k'(u) / 4."""
    value, grad = sign_poly_eval_with_grad((z - spec.alpha) / 2.0, spec.k)
    return (value + 1.0) / 2.0, grad / 4.0


def step_poly_eval_decimal(z: float | Decimal, spec: StepSpec, digits: int = 60) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        u = (Decimal(z) - Decimal(spec.alpha)) / 2
        return (sign_poly_eval_decimal(u, spec.k, digits) + 1) / 2
