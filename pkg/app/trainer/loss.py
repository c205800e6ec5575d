# Path from repo root: app/trainer/loss.py
from __future__ import annotations

from typing import Protocol, runtime_checkable

from app.core.errors import ConfigError


@runtime_checkable
class LossFn(Protocol):
    """1-Lipschitz convex regression loss l(y, y_hat) with l(y, y) = 0."""

    kind: str

    def eval(self, y: float, y_hat: float) -> float: ...

    def subgrad(self, y: float, y_hat: float) -> float:
        """Subgradient in the second argument."""
        ...


class AbsoluteLoss:
    kind = "absolute"

    def eval(self, y: float, y_hat: float) -> float:
        return abs(float(y) - float(y_hat))

    def subgrad(self, y: float, y_hat: float) -> float:
        # 0 at y_hat == y
        diff = float(y_hat) - float(y)
        if diff > 0.0:
            return 1.0
        if diff < 0.0:
            return -1.0
        return 0.0

    def __repr__(self) -> str:
        return "AbsoluteLoss()"


LOSSES: dict[str, type] = {"absolute": AbsoluteLoss}


def get_loss(kind: str = "absolute") -> LossFn:
    try:
        return LOSSES[kind]()
    except KeyError:
        raise ConfigError(f"unknown loss {kind!r}; available: {sorted(LOSSES)}") from None
