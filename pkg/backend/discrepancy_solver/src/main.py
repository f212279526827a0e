import os
import sys
# DON'T CHANGE THIS !!!
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import click

from src import config
from src.models.errors import (
    AssumptionViolationError,
    DiscrepancySolverError,
    InvalidConfigError,
    NoRootError,
    NonConvergenceError,
    OutputPathError,
    RejectedInputError,
    RootToleranceError,
)
from src.routes.gallery import gallery_cmd
from src.routes.solve import solve_cmd
from src.routes.sweep import sweep_cmd

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ASSUMPTION = 2
EXIT_NO_ROOT = 3
EXIT_NUMERICAL = 4
EXIT_USAGE = 64
EXIT_CANT_CREATE = 66

# Checked in order; first match wins
EXIT_CODES = (
    (AssumptionViolationError, EXIT_ASSUMPTION),
    (NoRootError, EXIT_NO_ROOT),
    (RootToleranceError, EXIT_NUMERICAL),
    (NonConvergenceError, EXIT_NUMERICAL),
    (OutputPathError, EXIT_CANT_CREATE),
    (InvalidConfigError, EXIT_USAGE),
    (RejectedInputError, EXIT_USAGE),
)


@click.group()
@click.option('--log-level', default=config.LOG_LEVEL, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Tikhonov regularization with the discrepancy principle for approximate minimizers."""
    config.configure_logging(log_level)


cli.add_command(solve_cmd)
cli.add_command(sweep_cmd)
cli.add_command(gallery_cmd)


def run(argv=None):
    """Invoke the CLI and return its exit code instead of exiting."""
    try:
        result = cli.main(args=argv, prog_name='discrepancy', standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo('Aborted!', err=True)
        return EXIT_FAILURE
    except DiscrepancySolverError as e:
        click.echo(f'Error: {e}', err=True)
        for error_type, code in EXIT_CODES:
            if isinstance(e, error_type):
                return code
        return EXIT_FAILURE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(run())
