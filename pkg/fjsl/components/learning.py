"""Position-based learning effect on processing times."""

import math
from decimal import ROUND_FLOOR, Decimal, localcontext
from functools import lru_cache

from pydantic import BaseModel, validator

from fjsl import TIME_SCALE

from .errors import LearningDomainError

# Distance to an integer below which the double-precision result is not trusted
_BOUNDARY_GUARD = 1e-6
_EXTENDED_DIGITS = 60


class LearningRate(BaseModel):
    """Learning rate of the position-based learning effect.

    Attributes:
        alpha (float): Nonnegative rate; 0 disables learning and keeps the scaling only.
    """

    alpha: float

    class Config:
        """Pydantic configuration."""

        frozen = True

    @validator("alpha")
    def validate_alpha(cls, value: float) -> float:
        """Check that the rate is finite and nonnegative."""
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"learning rate must be a nonnegative number, got {value}")
        return value


def check_alpha(alpha: float) -> float:
    """Validate a learning rate given as a plain number.

    Args:
        alpha (float): Learning rate.

    Raises:
        LearningDomainError: If the rate is negative or not finite.

    Returns:
        float: The validated rate.
    """
    if isinstance(alpha, LearningRate):
        return alpha.alpha
    try:
        return LearningRate(alpha=alpha).alpha
    except ValueError as e:
        raise LearningDomainError(str(e)) from e


def _psi_extended(alpha: float, p: int, r: int) -> int:
    with localcontext() as ctx:
        ctx.prec = _EXTENDED_DIGITS
        rate = Decimal(repr(float(alpha)))
        value = Decimal(TIME_SCALE * p) * Decimal(r) ** -rate + Decimal("0.5")
        return int(value.to_integral_value(rounding=ROUND_FLOOR))


@lru_cache(maxsize=65536)
def psi(alpha: float, p: int, r: int) -> int:
    """Actual processing time of an operation at position r of its machine.

    Computes floor(100 * p * r^(-alpha) + 1/2). The double-precision value is
    re-evaluated with extended precision when it falls too close to an integer, so the
    result does not depend on the platform's floating point.

    Args:
        alpha (float): Learning rate (>= 0).
        p (int): Standard processing time (>= 1), in original units.
        r (int): 1-based position of the operation in its machine sequence.

    Raises:
        LearningDomainError: If p < 1, r < 1 or alpha < 0.

    Returns:
        int: Actual processing time in scaled units, at least 1.
    """
    if p < 1 or r < 1:
        raise LearningDomainError(f"psi needs p >= 1 and r >= 1, got p={p}, r={r}")
    alpha = check_alpha(alpha)
    if r == 1 or alpha == 0:
        return TIME_SCALE * p

    x = TIME_SCALE * p * math.exp(-alpha * math.log(r)) + 0.5
    value = math.floor(x)
    if x - value < _BOUNDARY_GUARD or value + 1 - x < _BOUNDARY_GUARD:
        value = _psi_extended(alpha, p, r)
    return max(1, value)
