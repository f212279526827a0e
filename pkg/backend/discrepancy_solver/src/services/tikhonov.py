"""Tikhonov functional F(u) = ||Au - f_delta||^2 + eps*||u||^2 and its minimizers.

Three ways to produce u_{delta,eps}:

* `exact_minimize` - SVD filter factors, the unique minimizer.
* `certified_approx_minimize` - conjugate gradients on the normal equations
  (A*A + eps I) u = A* f_delta, stopped as soon as ||r||^2 / eps <= budget.
  F is a quadratic with Hessian 2(A*A + eps I) >= 2 eps I, so
  F(u) - inf F = r^T (A*A + eps I)^{-1} r <= ||r||^2 / eps.
* `perturbed_minimize` - the exact minimizer moved along a seeded direction
  until F(u) - inf F equals a chosen fraction of the budget.
"""
import logging
import math

import numpy as np

from src import config
from src.models.errors import NonConvergenceError, RejectedInputError
from src.models.operator import CONVOLUTION, DIAGONAL, as_vector
from src.models.solution import GapBudget, MinimizerReport, RegParam, SolverMode

logger = logging.getLogger(__name__)


def _data(op, f_delta):
    f = as_vector(f_delta, 'f_delta')
    if f.size != op.rows:
        raise RejectedInputError(f'Dimension mismatch: operator has {op.rows} rows, data has {f.size} entries')
    return f


def evaluate_objective(op, f_delta, eps, u):
    epsilon = RegParam.coerce(eps).epsilon
    f = _data(op, f_delta)
    u = as_vector(u, 'u')
    residual = op.apply(u) - f
    return float(residual @ residual + epsilon * (u @ u))


def exact_minimize(op, f_delta, eps):
    epsilon = RegParam.coerce(eps).epsilon
    f = _data(op, f_delta)

    if op.representation == DIAGONAL:
        u = op.data * f / (op.data ** 2 + epsilon)
    else:
        # convolution operators go through their cached dense twin
        target = op.densify() if op.representation == CONVOLUTION else op
        values, left, right = target.svd()
        filter_factors = values / (values ** 2 + epsilon)
        u = right @ (filter_factors * (left.T @ f))

    u = as_vector(u, 'u')
    return MinimizerReport(
        u=u,
        objective_value=evaluate_objective(op, f, epsilon, u),
        certified_gap_bound=0.0,
        iterations=0,
        mode=SolverMode.EXACT,
    )


def certified_approx_minimize(op, f_delta, eps, gap, max_iter=None, callback=None):
    """CG on the normal equations from u = 0; `callback(u, certificate)` sees every iterate."""
    epsilon = RegParam.coerce(eps).epsilon
    budget = GapBudget.coerce(gap).budget
    if budget <= 0:
        raise RejectedInputError(f'Certified minimization needs a positive gap budget, got {budget}')
    f = _data(op, f_delta)
    if max_iter is None:
        max_iter = config.CG_ITER_FACTOR * op.cols

    rhs = op.apply_adjoint(f)

    def normal(x):
        return op.apply_adjoint(op.apply(x)) + epsilon * x

    u = np.zeros(op.cols)
    r = np.array(rhs)
    rr = float(r @ r)
    certificate = rr / epsilon
    best_u, best_certificate = u.copy(), certificate
    direction = r.copy()
    iterations = 0

    while certificate > budget:
        curvature = float(direction @ normal(direction)) if iterations < max_iter else 0.0
        if curvature <= 0:
            reason = f'within {max_iter} iterations' if iterations >= max_iter else 'before CG broke down'
            raise NonConvergenceError(
                f'CG did not certify gap {budget:.3e} {reason} '
                f'(best certificate {best_certificate:.3e}, eps={epsilon:.3e})',
                best_u=as_vector(best_u, 'u'),
                best_certificate=best_certificate,
                iterations=iterations,
            )
        u = u + (rr / curvature) * direction
        # true residual, so the certificate never drifts from the iterate
        r = rhs - normal(u)
        rr_next = float(r @ r)
        certificate = rr_next / epsilon
        iterations += 1
        if callback is not None:
            callback(u.copy(), certificate)
        if certificate < best_certificate:
            best_u, best_certificate = u.copy(), certificate
        direction = r + (rr_next / rr) * direction
        rr = rr_next

    logger.debug('CG certified gap %.3e <= %.3e after %d iterations (eps=%.3e)',
                 certificate, budget, iterations, epsilon)
    u = as_vector(u, 'u')
    return MinimizerReport(
        u=u,
        objective_value=evaluate_objective(op, f, epsilon, u),
        certified_gap_bound=certificate,
        iterations=iterations,
        mode=SolverMode.CERTIFIED,
    )


def perturbed_minimize(op, f_delta, eps, gap, fraction=config.DEFAULT_PERTURB_FRACTION, seed=0):
    """Element of the tolerance set {F <= inf F + budget} that is not the minimizer."""
    epsilon = RegParam.coerce(eps).epsilon
    budget = GapBudget.coerce(gap).budget
    if not 0 < fraction <= 1:
        raise RejectedInputError(f'Perturbation fraction must lie in (0, 1], got {fraction}')
    exact = exact_minimize(op, f_delta, epsilon)

    direction = np.random.default_rng(seed).standard_normal(op.cols)
    direction /= np.linalg.norm(direction)
    ad = op.apply(direction)
    curvature = float(ad @ ad) + epsilon
    # F(u* + t d) - F(u*) = t^2 * (||Ad||^2 + eps)
    step = math.sqrt(fraction * budget / curvature)
    u = as_vector(exact.u + step * direction, 'u')
    return MinimizerReport(
        u=u,
        objective_value=evaluate_objective(op, f_delta, epsilon, u),
        certified_gap_bound=step ** 2 * curvature,
        iterations=0,
        mode=SolverMode.PERTURBED,
    )


def minimize(op, f_delta, eps, mode, gap=0.0, fraction=config.DEFAULT_PERTURB_FRACTION, seed=0):
    mode = SolverMode(mode)
    if mode == SolverMode.EXACT:
        return exact_minimize(op, f_delta, eps)
    if mode == SolverMode.CERTIFIED:
        return certified_approx_minimize(op, f_delta, eps, gap)
    return perturbed_minimize(op, f_delta, eps, gap, fraction=fraction, seed=seed)
