"""Validated configuration models for the discrepancy principle and sweeps."""
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src import config
from src.models.errors import InvalidConfigError
from src.models.problem import DirectionPolicy
from src.models.solution import SolverMode


class DiscrepancyConfig(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    C: float = Field(default=config.DEFAULT_C, gt=1.0)
    b: float = Field(default=config.DEFAULT_B, gt=0.0)
    root_rel_tol: float = Field(default=config.DEFAULT_ROOT_TOL, gt=0.0, lt=1.0)
    eps_init: float = Field(default=config.DEFAULT_EPS_INIT, gt=0.0)
    bracket_factor: float = Field(default=config.DEFAULT_BRACKET_FACTOR, gt=1.0)
    max_bracket_steps: int = Field(default=config.DEFAULT_MAX_BRACKET_STEPS, ge=1)
    max_bisection_steps: int = Field(default=config.DEFAULT_MAX_BISECTION_STEPS, ge=1)
    solver_mode: SolverMode = SolverMode.EXACT
    perturb_fraction: float = Field(default=config.DEFAULT_PERTURB_FRACTION, gt=0.0, le=1.0)
    perturb_seed: int = 0

    @model_validator(mode='after')
    def check_gap_factor(self):
        # a positive gap budget needs C^2 > 1 + b
        if self.C ** 2 <= 1.0 + self.b:
            raise ValueError(f'C^2 = {self.C ** 2:g} must exceed 1 + b = {1.0 + self.b:g}')
        return self

    @property
    def gap_factor(self):
        return self.C ** 2 - 1.0 - self.b

    def gap_budget(self, delta):
        return self.gap_factor * delta ** 2

    def minimizer_gap(self, delta):
        """Gap the minimizer is asked to reach at noise level delta.

        ||A(u - u*)||^2 <= F(u) - inf F, so a CG iterate certified to gap g moves h
        by at most sqrt(g). Capping g at (root_rel_tol*C*delta/4)^2 keeps the jumps
        between CG iteration counts inside a quarter of the root band.
        """
        budget = self.gap_budget(delta)
        if self.solver_mode != SolverMode.CERTIFIED:
            return budget
        return min(budget, (self.root_rel_tol * self.C * delta / 4.0) ** 2)

    @classmethod
    def build(cls, **kwargs):
        """Construct, turning pydantic validation failures into InvalidConfigError."""
        try:
            return cls(**{k: v for k, v in kwargs.items() if v is not None})
        except ValidationError as e:
            raise InvalidConfigError(f'Invalid discrepancy configuration: {e}') from e


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    problem: str
    n: int = Field(ge=1)
    p: float = Field(default=1.0, gt=0.0)
    s: float = Field(default=0.05, gt=0.0)
    delta_list: Tuple[float, ...]
    trials_per_delta: int = Field(default=1, ge=1)
    cfg: DiscrepancyConfig = Field(default_factory=DiscrepancyConfig)
    seed_base: int = 0
    policy: DirectionPolicy = DirectionPolicy.RANDOM_UNIT
    output_path: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    timing: bool = False

    @field_validator('delta_list')
    @classmethod
    def check_deltas(cls, value):
        if not value:
            raise ValueError('delta_list must not be empty')
        if any(d <= 0 for d in value):
            raise ValueError('every delta must be positive')
        if any(later >= earlier for earlier, later in zip(value, value[1:])):
            raise ValueError('delta_list must be strictly decreasing')
        return value

    @classmethod
    def build(cls, **kwargs):
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidConfigError(f'Invalid sweep specification: {e}') from e
