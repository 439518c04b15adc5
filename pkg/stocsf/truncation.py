"""Cutoff operator T_n and the truncated coefficient maps."""
from dataclasses import dataclass

import numpy as np

from .classes.coefficient_fields import CoefficientFields
from .classes.curvature_state import CurvatureState
from .coefficients import FORM_ITO, coefficient_fields
from .const import TRANSPORT_LITERAL
from .exceptions import InvalidInputError


@dataclass(frozen=True)
class TruncationLevel:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"Truncation level must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


def _level(n) -> int:
    return n.n if isinstance(n, TruncationLevel) else TruncationLevel(n).n


def cutoff(n, M):
    """
    T_n M = sign(M)/n for 0 < |M| < 1/n and M otherwise; T_n 0 = 1/n.

    Accepts scalars or arrays. |T_n M| >= 1/n everywhere, which keeps 1/L^2 below n^2.
    """
    level = _level(n)
    floor = 1.0 / level
    values = np.asarray(M, dtype=float)
    result = np.where(np.abs(values) >= floor, values, np.where(values < 0, -floor, floor))
    return float(result) if result.ndim == 0 else result


def truncated_coefficients(state: CurvatureState, sigma: float, n, form: str = FORM_ITO, transport: str = TRANSPORT_LITERAL) -> CoefficientFields:
    """Coefficients evaluated with every occurrence of L replaced by T_n L."""
    return coefficient_fields(state.with_length(cutoff(n, state.L)), sigma, form, transport)
