from functools import wraps

import click

from src import config
from src.models.problem import POLICY_ALIASES
from src.models.settings import DiscrepancyConfig
from src.models.solution import SolverMode
from src.services.gallery import DEFAULT_BLUR_WIDTH, PROBLEMS

SOLVER_ALIASES = {
    'exact': SolverMode.EXACT,
    'cg': SolverMode.CERTIFIED,
    'perturbed': SolverMode.PERTURBED,
}


def problem_options(default_n=10):
    """--problem/--n/--p/--s; the wrapped command receives `problem_args`."""
    def decorator(f):
        @click.option('--problem', type=click.Choice(list(PROBLEMS)), default='diagonal', show_default=True)
        @click.option('--n', 'n', type=int, default=default_n, show_default=True, help='Problem size.')
        @click.option('--p', 'p', type=float, default=1.0, show_default=True, help='Diagonal decay exponent.')
        @click.option('--s', 's', type=float, default=DEFAULT_BLUR_WIDTH, show_default=True, help='Blur kernel width.')
        @wraps(f)
        def decorated(*args, problem, n, p, s, **kwargs):
            kwargs['problem_args'] = {'name': problem, 'n': n, 'p': p, 's': s}
            return f(*args, **kwargs)
        return decorated
    return decorator


def principle_options(f):
    """Discrepancy-principle constants, solver and noise flags; passes `cfg`, `policy`, `seed`."""
    @click.option('--C', 'c_const', type=float, default=config.DEFAULT_C, show_default=True,
                  help='Discrepancy multiplier C > 1.')
    @click.option('--b', 'b_const', type=float, default=config.DEFAULT_B, show_default=True,
                  help='Slack b > 0 with C^2 > 1 + b.')
    @click.option('--solver', type=click.Choice(list(SOLVER_ALIASES)), default='exact', show_default=True)
    @click.option('--root-tol', type=float, default=config.DEFAULT_ROOT_TOL, show_default=True)
    @click.option('--perturb-fraction', type=float, default=config.DEFAULT_PERTURB_FRACTION, show_default=True,
                  help='Share of the gap budget used by --solver perturbed.')
    @click.option('--policy', type=click.Choice(list(POLICY_ALIASES)), default='random', show_default=True)
    @click.option('--seed', type=int, default=0, show_default=True)
    @wraps(f)
    def decorated(*args, c_const, b_const, solver, root_tol, perturb_fraction, policy, seed, **kwargs):
        kwargs['cfg'] = DiscrepancyConfig.build(
            C=c_const,
            b=b_const,
            root_rel_tol=root_tol,
            solver_mode=SOLVER_ALIASES[solver],
            perturb_fraction=perturb_fraction,
            perturb_seed=seed,
        )
        kwargs['policy'] = POLICY_ALIASES[policy]
        kwargs['seed'] = seed
        return f(*args, **kwargs)
    return decorated
