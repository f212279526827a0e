import logging
import os
import sys

# Defaults can be overridden from the environment; CLI flags override both.
DEFAULT_C = float(os.environ.get('DISCREPANCY_C', '1.5'))
DEFAULT_B = float(os.environ.get('DISCREPANCY_B', '0.5'))
DEFAULT_ROOT_TOL = float(os.environ.get('DISCREPANCY_ROOT_TOL', '1e-6'))
DEFAULT_EPS_INIT = float(os.environ.get('DISCREPANCY_EPS_INIT', '1.0'))
DEFAULT_BRACKET_FACTOR = float(os.environ.get('DISCREPANCY_BRACKET_FACTOR', '10'))
DEFAULT_MAX_BRACKET_STEPS = int(os.environ.get('DISCREPANCY_MAX_BRACKET_STEPS', '200'))
DEFAULT_MAX_BISECTION_STEPS = int(os.environ.get('DISCREPANCY_MAX_BISECTION_STEPS', '200'))
DEFAULT_PERTURB_FRACTION = float(os.environ.get('DISCREPANCY_PERTURB_FRACTION', '0.9'))

# CG iteration cap is CG_ITER_FACTOR * cols
CG_ITER_FACTOR = int(os.environ.get('DISCREPANCY_CG_ITER_FACTOR', '50'))

LOG_LEVEL = os.environ.get('DISCREPANCY_LOG_LEVEL', 'WARNING')
LOG_FORMAT = '%(asctime)s %(levelname)8s %(name)s: %(message)s'


def configure_logging(level=None):
    """Configure root logging once; stdout stays reserved for reports."""
    logging.basicConfig(
        stream=sys.stderr,
        format=LOG_FORMAT,
        level=(level or LOG_LEVEL).upper(),
        force=True,
    )
