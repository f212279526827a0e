"""Synthetic ill-posed test problems with known minimal-norm solutions."""
import logging

import numpy as np
import scipy.linalg

from src.models.errors import RejectedInputError
from src.models.operator import LinearOperator, as_vector
from src.models.problem import DirectionPolicy, NoisyObservation, ProblemInstance

logger = logging.getLogger(__name__)

MAX_HILBERT_SIZE = 500
MIN_BLUR_SIZE = 8
DEFAULT_BLUR_WIDTH = 0.05
NOISE_NORM_RTOL = 1e-13


def problem_from_operator(op, y, name):
    """Wrap an operator and a solution vector; f is computed as Ay."""
    y = as_vector(y, 'y')
    f = op.apply(y)
    values = op.densify().svd().values
    return ProblemInstance(op=op, y=y, f=f, name=name,
                           sigma_max=float(values[0]), sigma_min=float(values[-1]))


def make_diagonal_problem(n, p=1.0):
    """A = diag(i^-p), y_i = 1/i, so f_i = i^(-p-1)."""
    if n < 1 or p <= 0:
        raise RejectedInputError(f'Diagonal problem needs n >= 1 and p > 0, got n={n}, p={p}')
    index = np.arange(1, n + 1, dtype=np.float64)
    op = LinearOperator.diagonal(index ** -p)
    return problem_from_operator(op, 1.0 / index, f'diagonal(n={n},p={p:g})')


def make_hilbert_problem(n):
    """A_ij = 1/(i + j - 1), y = ones."""
    if not 1 <= n <= MAX_HILBERT_SIZE:
        raise RejectedInputError(f'Hilbert problem needs 1 <= n <= {MAX_HILBERT_SIZE}, got n={n}')
    op = LinearOperator.dense(scipy.linalg.hilbert(n))
    return problem_from_operator(op, np.ones(n), f'hilbert(n={n})')


def blur_kernel(n, s):
    j = np.arange(n)
    distance = np.minimum(j, n - j) / n
    kernel = np.exp(-distance ** 2 / (2.0 * s ** 2))
    return kernel / kernel.sum()


def make_blur_problem(n, s=DEFAULT_BLUR_WIDTH):
    """Periodic Gaussian blur on n points of [0, 1) applied to a triangular bump."""
    if n < MIN_BLUR_SIZE or s <= 0:
        raise RejectedInputError(f'Blur problem needs n >= {MIN_BLUR_SIZE} and s > 0, got n={n}, s={s}')
    op = LinearOperator.convolution(blur_kernel(n, s))
    grid = np.arange(n) / n
    y = np.maximum(0.0, 1.0 - np.abs(grid - 0.5) * 4.0)
    return problem_from_operator(op, y, f'blur(n={n},s={s:g})')


PROBLEMS = {
    'diagonal': {
        'build': lambda n, p, s: make_diagonal_problem(n, p),
        'description': 'diagonal spectrum sigma_i = i^-p, y_i = 1/i',
        'parameters': 'n >= 1, p > 0',
        'sample_n': 10,
    },
    'hilbert': {
        'build': lambda n, p, s: make_hilbert_problem(n),
        'description': 'Hilbert matrix A_ij = 1/(i+j-1), y = ones',
        'parameters': f'1 <= n <= {MAX_HILBERT_SIZE}',
        'sample_n': 10,
    },
    'blur': {
        'build': lambda n, p, s: make_blur_problem(n, s),
        'description': 'circular Gaussian blur of a triangular bump',
        'parameters': f'n >= {MIN_BLUR_SIZE}, s > 0 (default {DEFAULT_BLUR_WIDTH})',
        'sample_n': 64,
    },
}


def build_problem(name, n, p=1.0, s=DEFAULT_BLUR_WIDTH):
    if name not in PROBLEMS:
        raise RejectedInputError(f'Unknown problem {name!r}; valid names: {", ".join(PROBLEMS)}')
    problem = PROBLEMS[name]['build'](n, p, s)
    logger.debug('Built %r', problem)
    return problem


def noise_direction(problem, policy, seed):
    rows = problem.op.rows
    policy = DirectionPolicy(policy)
    if policy == DirectionPolicy.RANDOM_UNIT:
        xi = np.random.default_rng(seed).standard_normal(rows)
    elif policy == DirectionPolicy.WORST_CASE:
        xi = np.array(problem.op.densify().svd().left[:, -1])
    else:
        xi = np.zeros(rows)
        xi[0] = 1.0
    return xi / np.linalg.norm(xi)


def match_noise_norm(f, f_delta, delta, rtol=NOISE_NORM_RTOL, max_passes=8):
    """Nudge f_delta so that ||f_delta - f||^2 = delta^2 within rtol.

    f + delta*xi rounds on the float grid around f, which is coarse next to delta
    when delta << ||f||. Each pass rewrites the smallest noise component able to
    absorb the excess, landing on the side that leaves the norm at most delta.
    """
    f_delta = np.array(f_delta, dtype=np.float64)
    for _ in range(max_passes):
        noise = f_delta - f
        excess = float(noise @ noise) - delta ** 2
        if abs(excess) <= rtol * delta ** 2:
            break
        magnitude = np.abs(noise)
        feasible = magnitude ** 2 >= excess
        if not feasible.any():
            break
        k = int(np.argmin(np.where(feasible, magnitude, np.inf)))
        target = float(np.sqrt(magnitude[k] ** 2 - excess))
        sign = -1.0 if noise[k] < 0 else 1.0
        value = f[k] + sign * target
        while abs(value - f[k]) > target:
            value = np.nextafter(value, f[k])
        f_delta[k] = value
    return f_delta


def make_noisy(problem, delta, seed=0, direction_policy=DirectionPolicy.RANDOM_UNIT):
    """f_delta = f + delta * xi with a unit direction xi, so ||f_delta - f|| = delta."""
    if not (np.isfinite(delta) and delta > 0):
        raise RejectedInputError(f'Noise level delta must be positive and finite, got {delta}')
    policy = DirectionPolicy(direction_policy)
    xi = noise_direction(problem, policy, seed)
    return NoisyObservation(
        f_delta=as_vector(match_noise_norm(problem.f, problem.f + delta * xi, delta), 'f_delta'),
        delta=float(delta),
        seed=int(seed),
        direction_policy=policy,
    )


def data_residual(problem):
    """||Ay - f|| / ||f||."""
    f_norm = np.linalg.norm(problem.f)
    residual = np.linalg.norm(problem.op.apply(problem.y) - problem.f)
    return float(residual / f_norm) if f_norm > 0 else float(residual)


def minimal_norm_leakage(problem, null_rtol=0.0):
    """Largest |<y, v_i>| over right singular vectors with sigma_i <= null_rtol * sigma_max."""
    values, _, right = problem.op.densify().svd()
    null = values <= null_rtol * values[0]
    if values.size < problem.op.cols:
        # thin SVD of a wide matrix leaves part of the null space implicit
        basis = scipy.linalg.null_space(problem.op.to_matrix())
        extra = np.abs(basis.T @ problem.y)
    else:
        extra = np.zeros(0)
    leak = np.abs(right[:, null].T @ problem.y)
    combined = np.concatenate([leak, extra])
    return float(combined.max()) if combined.size else 0.0
