import logging
import os

import click

from src.models.errors import OutputPathError
from src.models.settings import SweepSpec
from src.routes.options import principle_options, problem_options
from src.services.sweep import epsilon_decreases, run_sweep, summarize_rows, write_csv

logger = logging.getLogger(__name__)


def parse_delta_list(ctx, param, value):
    try:
        return tuple(float(item) for item in value.split(',') if item.strip())
    except ValueError:
        raise click.BadParameter(f'expected comma-separated numbers, got {value!r}')


def _check_writable(path):
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise OutputPathError(f'Cannot write output file {path!r}')
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise OutputPathError(f'Cannot write output file {path!r}')


def _fmt(value):
    return '-' if value is None else f'{value:.6e}'


@click.command('sweep')
@problem_options(default_n=50)
@principle_options
@click.option('--delta-list', required=True, callback=parse_delta_list,
              help='Strictly decreasing comma-separated noise levels, e.g. 1e-1,1e-2,1e-3.')
@click.option('--trials', type=int, default=1, show_default=True)
@click.option('--out', 'out', required=True, type=click.Path(dir_okay=False), help='CSV output path.')
@click.option('--workers', type=int, default=1, show_default=True, help='Trials run concurrently.')
@click.option('--timing/--no-timing', default=False, help='Fill the wall_ms column (breaks byte reproducibility).')
def sweep_cmd(problem_args, cfg, policy, seed, delta_list, trials, out, workers, timing):
    """Run the principle over decreasing noise levels and write one CSV row per trial."""
    spec = SweepSpec.build(
        problem=problem_args['name'],
        n=problem_args['n'],
        p=problem_args['p'],
        s=problem_args['s'],
        delta_list=delta_list,
        trials_per_delta=trials,
        cfg=cfg,
        seed_base=seed,
        policy=policy,
        output_path=out,
        workers=workers,
        timing=timing,
    )
    _check_writable(out)
    rows = run_sweep(spec)
    try:
        write_csv(rows, out)
    except OSError as e:
        raise OutputPathError(f'Cannot write output file {out!r}: {e}') from e

    summaries = summarize_rows(rows)
    click.echo(f'{"delta":>14}  {"ok":>7}  {"median err":>14}  {"median eps":>14}')
    for summary in summaries:
        click.echo(f'{summary.delta:>14.6e}  {summary.succeeded:>3}/{summary.trials:<3}  '
                   f'{_fmt(summary.median_err):>14}  {_fmt(summary.median_epsilon):>14}')
    trend = 'decreasing' if epsilon_decreases(summaries) else 'not monotone'
    click.echo(f'eps(delta) trend as delta -> 0: {trend}')
    click.echo(f'rows written to {out}')
    return 0
