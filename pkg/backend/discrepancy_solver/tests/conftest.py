import os
import sys

# Same import root as src/main.py
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from src.models.settings import DiscrepancyConfig
from src.models.solution import SolverMode
from src.services.gallery import make_diagonal_problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def exact_cfg():
    return DiscrepancyConfig(C=1.5, b=0.5)


@pytest.fixture
def cg_cfg():
    return DiscrepancyConfig(C=1.5, b=0.5, solver_mode=SolverMode.CERTIFIED)


@pytest.fixture
def scalar_problem():
    # A = (1), y = f = (1)
    return make_diagonal_problem(1, 1.0)
