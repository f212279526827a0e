"""Discrepancy principle: pick eps so that ||A u_{delta,eps} - f_delta|| = C*delta.

u_{delta,eps} may be any element whose Tikhonov value is within
(C^2 - 1 - b) * delta^2 of the infimum; the configured solver mode decides
which one. CG is held to `cfg.minimizer_gap(delta)`, a subset of that set on
which h stays within a quarter of the root band of its exact value.
Bracketing walks eps geometrically from `eps_init`, then the root is refined
by bisection on log(eps).
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.models.errors import AssumptionViolationError, NoRootError, RejectedInputError, RootToleranceError
from src.models.operator import as_vector, norm
from src.models.solution import PrincipleSolution
from src.services.tikhonov import minimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidatedData:
    f_delta: np.ndarray
    delta: float
    data_norm: float
    target: float  # C * delta


@dataclass(frozen=True)
class Probe:
    epsilon: float
    discrepancy: float
    report: object


@dataclass(frozen=True)
class Bracket:
    lo: Probe
    hi: Probe
    trace: tuple = field(default_factory=tuple)
    iterations: int = 0

    @property
    def eps_lo(self):
        return self.lo.epsilon

    @property
    def eps_hi(self):
        return self.hi.epsilon


def _check_delta(delta):
    if not (math.isfinite(delta) and delta > 0):
        raise RejectedInputError(f'Noise level delta must be positive and finite, got {delta}')
    return float(delta)


def discrepancy_norm(op, f_delta, eps, cfg, delta):
    """h(delta, eps) = ||A u_{delta,eps} - f_delta|| and the minimizer report behind it."""
    delta = _check_delta(delta)
    f = as_vector(f_delta, 'f_delta')
    report = minimize(
        op, f, eps, cfg.solver_mode,
        gap=cfg.minimizer_gap(delta),
        fraction=cfg.perturb_fraction,
        seed=cfg.perturb_seed,
    )
    h = norm(op.apply(report.u) - f)
    return h, report


def validate_data(f_delta, delta, cfg):
    delta = _check_delta(delta)
    f = as_vector(f_delta, 'f_delta')
    data_norm = norm(f)
    target = cfg.C * delta
    if not data_norm > target:
        raise AssumptionViolationError(
            f'||f_delta|| > C*delta fails: ||f_delta|| = {data_norm:.6g} <= C*delta = {target:.6g} '
            f'(C={cfg.C:g}, delta={delta:g}); the data is noise-dominated and the principle does not apply'
        )
    return ValidatedData(f_delta=f, delta=delta, data_norm=data_norm, target=target)


def bracket_root(op, f_delta, delta, cfg):
    """Find eps_lo < eps_hi with h(eps_lo) < C*delta < h(eps_hi)."""
    target = cfg.C * _check_delta(delta)
    trace = []
    iterations = 0

    def probe(eps):
        nonlocal iterations
        h, report = discrepancy_norm(op, f_delta, eps, cfg, delta)
        trace.append((eps, h))
        iterations += report.iterations
        logger.debug('bracket eps=%.6e h=%.6e target=%.6e', eps, h, target)
        return Probe(eps, h, report)

    lo = None
    current = probe(cfg.eps_init)
    steps = 0
    # h tends to ||f_delta|| > C*delta as eps grows
    while current.discrepancy <= target:
        if current.discrepancy < target:
            lo = current
        if steps >= cfg.max_bracket_steps:
            raise NoRootError(
                f'h stayed <= C*delta = {target:.6g} up to eps = {current.epsilon:.3e} '
                f'after {steps} steps; check that ||f_delta|| > C*delta',
                trace,
            )
        current = probe(current.epsilon * cfg.bracket_factor)
        steps += 1
    hi = current

    steps = 0
    while lo is None:
        if steps >= cfg.max_bracket_steps:
            raise NoRootError(
                f'h stayed >= C*delta = {target:.6g} down to eps = {hi.epsilon:.3e} after {steps} steps; '
                f'Au = f may be unsolvable at this discretization or delta is underestimated',
                trace,
            )
        current = probe(hi.epsilon / cfg.bracket_factor)
        steps += 1
        if current.discrepancy < target:
            lo = current
        else:
            hi = current

    return Bracket(lo=lo, hi=hi, trace=tuple(trace), iterations=iterations)


def solve_for_epsilon(op, f_delta, delta, cfg):
    data = validate_data(f_delta, delta, cfg)
    target = data.target
    band = cfg.root_rel_tol * target

    bracket = bracket_root(op, data.f_delta, data.delta, cfg)
    trace = list(bracket.trace)
    iterations = bracket.iterations

    def finish(probe):
        solution = PrincipleSolution(
            epsilon=probe.epsilon,
            u_delta=probe.report.u,
            discrepancy=probe.discrepancy,
            gap_budget_used=cfg.gap_budget(data.delta),
            bracket_trace=tuple(trace),
            iterations_total=iterations,
            mode=cfg.solver_mode,
            report=probe.report,
        )
        logger.info('delta=%.3e eps=%.6e h=%.6e (target %.6e, %d probes)',
                    data.delta, solution.epsilon, solution.discrepancy, target, len(trace))
        return solution

    best = min((bracket.lo, bracket.hi), key=lambda p: abs(p.discrepancy - target))
    if abs(best.discrepancy - target) <= band:
        return finish(best)

    log_lo, log_hi = math.log(bracket.eps_lo), math.log(bracket.eps_hi)
    for _ in range(cfg.max_bisection_steps):
        eps = math.exp(0.5 * (log_lo + log_hi))
        h, report = discrepancy_norm(op, data.f_delta, eps, cfg, data.delta)
        trace.append((eps, h))
        iterations += report.iterations
        current = Probe(eps, h, report)
        logger.debug('bisect eps=%.6e h=%.6e target=%.6e', eps, h, target)

        if abs(h - target) < abs(best.discrepancy - target):
            best = current
        if abs(h - target) <= band:
            return finish(current)
        if h < target:
            log_lo = math.log(eps)
        else:
            log_hi = math.log(eps)

    raise RootToleranceError(
        f'Bisection did not reach |h - C*delta| <= {cfg.root_rel_tol:g}*C*delta within '
        f'{cfg.max_bisection_steps} steps (best eps={best.epsilon:.6e}, h={best.discrepancy:.6e}, target={target:.6e})',
        best_epsilon=best.epsilon,
        best_u=best.report.u,
        best_discrepancy=best.discrepancy,
        trace=trace,
    )


def norm_bound_check(sol, y, delta, cfg, slack=1e-6):
    """Sharpened norm bound ||u_delta||^2 + b*delta^2/eps <= ||y||^2 (1 + slack)."""
    delta = _check_delta(delta)
    y = as_vector(y, 'y')
    u = sol.u_delta
    lhs = float(u @ u) + cfg.b * delta ** 2 / sol.epsilon
    return lhs <= float(y @ y) * (1.0 + slack)
