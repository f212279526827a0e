import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from src.models.errors import RejectedInputError


class SolverMode(str, Enum):
    EXACT = 'exact'
    CERTIFIED = 'certified-approximate'
    PERTURBED = 'perturbed'  # exact minimizer pushed to a chosen gap inside the budget


@dataclass(frozen=True)
class RegParam:
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise RejectedInputError(f'Regularization parameter must be positive and finite, got {self.epsilon}')

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, cls) else cls(float(value))


@dataclass(frozen=True)
class GapBudget:
    """Allowed excess F(u) - inf F; (C^2 - 1 - b) * delta^2 inside the principle."""

    budget: float

    def __post_init__(self):
        if not (math.isfinite(self.budget) and self.budget >= 0):
            raise RejectedInputError(f'Gap budget must be nonnegative and finite, got {self.budget}')

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, cls) else cls(float(value))


@dataclass(frozen=True)
class MinimizerReport:
    u: np.ndarray
    objective_value: float
    certified_gap_bound: float
    iterations: int
    mode: SolverMode

    def __repr__(self):
        return (f'<MinimizerReport {self.mode.value} F={self.objective_value:.6e} '
                f'gap<={self.certified_gap_bound:.3e} iters={self.iterations}>')


@dataclass(frozen=True)
class PrincipleSolution:
    epsilon: float
    u_delta: np.ndarray
    discrepancy: float
    gap_budget_used: float
    bracket_trace: tuple = field(default_factory=tuple)  # (epsilon, h) pairs, bracketing then bisection
    iterations_total: int = 0
    mode: SolverMode = SolverMode.EXACT
    report: Optional[MinimizerReport] = None

    def __repr__(self):
        return f'<PrincipleSolution eps={self.epsilon:.6e} h={self.discrepancy:.6e} mode={self.mode.value}>'
