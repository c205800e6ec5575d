# Path from repo root: app/polyapprox/polynomial.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree, exact (int / Fraction) or float; trailing zeros stripped."""

    coeffs: tuple[Real, ...] = ()

    def __post_init__(self) -> None:
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, j: int, coeff: Real = 1) -> Polynomial:
        return cls((0,) * j + (coeff,))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs_coeff(self) -> Real:
        return max((abs(c) for c in self.coeffs), default=0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coeffs)
