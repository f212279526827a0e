import click

from src.services.gallery import PROBLEMS, build_problem


@click.command('gallery')
@click.option('--problem', type=click.Choice(list(PROBLEMS)), default=None, help='Only this family.')
@click.option('--n', 'n', type=int, default=None, help='Sample size for the diagnostics.')
@click.option('--p', 'p', type=float, default=1.0, show_default=True)
@click.option('--s', 's', type=float, default=0.05, show_default=True)
def gallery_cmd(problem, n, p, s):
    """List the test problem families with condition diagnostics."""
    names = [problem] if problem else list(PROBLEMS)
    for name in names:
        entry = PROBLEMS[name]
        instance = build_problem(name, n or entry['sample_n'], p, s)
        click.echo(f'{name}: {entry["description"]}')
        click.echo(f'  parameters: {entry["parameters"]}')
        click.echo(f'  sample {instance.name}: sigma_max={instance.sigma_max:.6e} '
                   f'sigma_min={instance.sigma_min:.6e} condition={instance.condition_number:.6e}')
    return 0
