from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.models.operator import LinearOperator


class DirectionPolicy(str, Enum):
    RANDOM_UNIT = 'random-unit'
    WORST_CASE = 'worst-case-smallest-singular'
    AXIS = 'axis'


# Short names accepted on the command line
POLICY_ALIASES = {
    'random': DirectionPolicy.RANDOM_UNIT,
    'worst': DirectionPolicy.WORST_CASE,
    'axis': DirectionPolicy.AXIS,
}


@dataclass(frozen=True)
class ProblemInstance:
    op: LinearOperator
    y: np.ndarray  # minimal-norm solution
    f: np.ndarray  # exact data, f = Ay
    name: str
    sigma_max: float
    sigma_min: float

    @property
    def condition_number(self):
        return self.sigma_max / self.sigma_min if self.sigma_min > 0 else float('inf')

    def __repr__(self):
        return f'<ProblemInstance {self.name} {self.op.rows}x{self.op.cols} cond={self.condition_number:.3e}>'


@dataclass(frozen=True)
class NoisyObservation:
    f_delta: np.ndarray
    delta: float
    seed: int
    direction_policy: DirectionPolicy

    def __repr__(self):
        return f'<NoisyObservation delta={self.delta:g} seed={self.seed} policy={self.direction_policy.value}>'
