"""delta-sweep convergence experiments and their CSV serialization."""
import csv
import hashlib
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.models.errors import DiscrepancySolverError, RejectedInputError
from src.models.operator import norm
from src.services.discrepancy import solve_for_epsilon
from src.services.gallery import build_problem, make_noisy

logger = logging.getLogger(__name__)

# status for trials that died in numpy/scipy rather than in the solver
NUMERICAL_FAILURE = 'numerical'

# bump when CSV_HEADER changes
CSV_SCHEMA_VERSION = 1
CSV_HEADER = ('delta', 'trial', 'epsilon', 'h', 'err', 'u_norm', 'y_norm',
              'gap_budget', 'iters', 'mode', 'status', 'wall_ms')


@dataclass(frozen=True)
class SweepRow:
    delta: float
    trial: int
    epsilon: Optional[float]
    h: Optional[float]
    err: Optional[float]
    u_norm: Optional[float]
    y_norm: float
    gap_budget: float
    iters: Optional[int]
    mode: str
    status: str
    wall_ms: Optional[float] = None

    @property
    def ok(self):
        return self.status == 'ok'


@dataclass(frozen=True)
class DeltaSummary:
    delta: float
    trials: int
    succeeded: int
    median_err: Optional[float]
    median_epsilon: Optional[float]


def trial_seed(seed_base, delta_index, trial):
    """Deterministic per-(delta, trial) seed, independent of solver mode."""
    digest = hashlib.sha256(f'{delta_index}:{trial}'.encode()).digest()
    return seed_base + int.from_bytes(digest[:4], 'big')


def run_trial(problem, spec, delta_index, trial):
    delta = spec.delta_list[delta_index]
    cfg = spec.cfg
    y_norm = norm(problem.y)
    started = time.perf_counter()
    observation = make_noisy(problem, delta, trial_seed(spec.seed_base, delta_index, trial), spec.policy)

    def failed(status):
        return SweepRow(delta=delta, trial=trial, epsilon=None, h=None, err=None, u_norm=None,
                        y_norm=y_norm, gap_budget=cfg.gap_budget(delta), iters=None,
                        mode=cfg.solver_mode.value, status=status,
                        wall_ms=(time.perf_counter() - started) * 1e3 if spec.timing else None)

    try:
        solution = solve_for_epsilon(problem.op, observation.f_delta, delta, cfg)
    except DiscrepancySolverError as e:
        logger.warning('delta=%g trial=%d failed (%s): %s', delta, trial, e.status, e)
        return failed(e.status)
    except (np.linalg.LinAlgError, ValueError, ArithmeticError) as e:
        logger.warning('delta=%g trial=%d failed numerically: %s', delta, trial, e, exc_info=True)
        return failed(NUMERICAL_FAILURE)

    return SweepRow(
        delta=delta,
        trial=trial,
        epsilon=solution.epsilon,
        h=solution.discrepancy,
        err=norm(solution.u_delta - problem.y),
        u_norm=norm(solution.u_delta),
        y_norm=y_norm,
        gap_budget=solution.gap_budget_used,
        iters=solution.iterations_total,
        mode=cfg.solver_mode.value,
        status='ok',
        wall_ms=(time.perf_counter() - started) * 1e3 if spec.timing else None,
    )


def run_sweep(spec, problem=None):
    """All (delta, trial) rows in (delta index, trial) order."""
    if problem is None:
        problem = build_problem(spec.problem, spec.n, spec.p, spec.s)
    tasks = [(di, trial) for di in range(len(spec.delta_list)) for trial in range(spec.trials_per_delta)]
    logger.info('Sweep over %s: %d deltas x %d trials, mode %s',
                problem.name, len(spec.delta_list), spec.trials_per_delta, spec.cfg.solver_mode.value)

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(lambda task: run_trial(problem, spec, *task), tasks))
    else:
        rows = [run_trial(problem, spec, di, trial) for di, trial in tasks]
    return rows


def _format(value):
    if value is None:
        return ''
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), '.17g')


def write_csv(rows, path):
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_format(getattr(row, column)) for column in CSV_HEADER])


def read_csv(path):
    def number(text, cast=float):
        return cast(text) if text != '' else None

    rows = []
    with open(path, newline='') as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise RejectedInputError(
                f'{path}: header does not match sweep CSV schema version {CSV_SCHEMA_VERSION}')
        for record in reader:
            rows.append(SweepRow(
                delta=float(record['delta']),
                trial=int(record['trial']),
                epsilon=number(record['epsilon']),
                h=number(record['h']),
                err=number(record['err']),
                u_norm=number(record['u_norm']),
                y_norm=float(record['y_norm']),
                gap_budget=float(record['gap_budget']),
                iters=number(record['iters'], int),
                mode=record['mode'],
                status=record['status'],
                wall_ms=number(record['wall_ms']),
            ))
    return rows


def summarize_rows(rows):
    """Per-delta medians over successful rows, in order of first appearance."""
    grouped = {}
    for row in rows:
        grouped.setdefault(row.delta, []).append(row)

    summaries = []
    for delta, group in grouped.items():
        ok = [row for row in group if row.ok]
        summaries.append(DeltaSummary(
            delta=delta,
            trials=len(group),
            succeeded=len(ok),
            median_err=float(np.median([row.err for row in ok])) if ok else None,
            median_epsilon=float(np.median([row.epsilon for row in ok])) if ok else None,
        ))
    return summaries


def epsilon_decreases(summaries):
    """Whether median eps(delta) strictly decreases as delta decreases (reported, not enforced)."""
    values = [s.median_epsilon for s in summaries]
    if any(v is None for v in values):
        return False
    return all(later < earlier for earlier, later in zip(values, values[1:]))
