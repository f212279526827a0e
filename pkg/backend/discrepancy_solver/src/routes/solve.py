import logging

import click

from src.models.operator import norm
from src.services.discrepancy import norm_bound_check, solve_for_epsilon
from src.services.gallery import build_problem, make_noisy
from src.routes.options import principle_options, problem_options

logger = logging.getLogger(__name__)


@click.command('solve')
@problem_options(default_n=10)
@principle_options
@click.option('--delta', type=float, required=True, help='Noise level; ||f_delta - f|| = delta exactly.')
def solve_cmd(problem_args, cfg, policy, seed, delta):
    """Choose eps by the discrepancy principle for one noisy problem."""
    problem = build_problem(**problem_args)
    observation = make_noisy(problem, delta, seed, policy)
    solution = solve_for_epsilon(problem.op, observation.f_delta, delta, cfg)

    u_norm = norm(solution.u_delta)
    y_norm = norm(problem.y)
    report = solution.report
    lines = [
        ('problem', problem.name),
        ('noise', f'delta={delta:.10g} policy={policy.value} seed={seed}'),
        ('solver', cfg.solver_mode.value),
        ('target C*delta', f'{cfg.C * delta:.10g}'),
        ('epsilon', f'{solution.epsilon:.10g}'),
        ('h', f'{solution.discrepancy:.10g}'),
        ('error ||u_delta - y||', f'{norm(solution.u_delta - problem.y):.10g}'),
        ('||u_delta|| vs ||y||', f'{u_norm:.10g} vs {y_norm:.10g}'),
        ('gap budget', f'{solution.gap_budget_used:.10g}'),
        ('certified gap', f'{report.certified_gap_bound:.10g}'),
        ('minimizer iterations', f'{solution.iterations_total}'),
        ('probes', f'{len(solution.bracket_trace)}'),
        ('norm bound', 'holds' if norm_bound_check(solution, problem.y, delta, cfg) else 'VIOLATED'),
    ]
    width = max(len(label) for label, _ in lines)
    for label, value in lines:
        click.echo(f'{label.ljust(width)}  {value}')
    return 0
