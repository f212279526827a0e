import numpy as np
import pytest

from src.models.errors import (
    AssumptionViolationError,
    DiscrepancySolverError,
    InvalidConfigError,
    NoRootError,
    RejectedInputError,
    RootToleranceError,
)
from src.models.operator import LinearOperator
from src.models.problem import DirectionPolicy
from src.models.settings import DiscrepancyConfig
from src.models.solution import SolverMode
from src.services.discrepancy import (
    bracket_root,
    discrepancy_norm,
    norm_bound_check,
    solve_for_epsilon,
    validate_data,
)
from src.services.gallery import build_problem, make_noisy

SCALAR = LinearOperator.diagonal([1.0])
F_DELTA = np.array([1.05])
DELTA = 0.05

GALLERY = [
    ('diagonal', 10), ('diagonal', 50), ('diagonal', 100),
    ('hilbert', 5), ('hilbert', 10),
    ('blur', 64),
]
DELTAS = [1e-1, 1e-2, 1e-3, 1e-4]
MODES = [SolverMode.EXACT, SolverMode.CERTIFIED]


def test_config_defaults_and_constraint():
    cfg = DiscrepancyConfig()
    assert (cfg.C, cfg.b) == (1.5, 0.5)
    assert cfg.gap_factor == pytest.approx(0.75)
    with pytest.raises(InvalidConfigError, match='must exceed'):
        DiscrepancyConfig.build(C=1.1, b=0.5)
    with pytest.raises(InvalidConfigError):
        DiscrepancyConfig.build(C=0.9)
    with pytest.raises(InvalidConfigError):
        DiscrepancyConfig.build(b=-1.0)


def test_discrepancy_scalar_closed_form(exact_cfg):
    h, report = discrepancy_norm(SCALAR, F_DELTA, 1.0 / 13.0, exact_cfg, DELTA)
    assert h == pytest.approx(0.075, rel=1e-12)
    assert report.u[0] == pytest.approx(0.975, rel=1e-14)


def test_discrepancy_diagonal_example(exact_cfg):
    h, _ = discrepancy_norm(LinearOperator.diagonal([1.0, 0.5]), [1.0, 0.5], 0.25, exact_cfg, DELTA)
    assert h == pytest.approx(np.sqrt(0.04 + 0.0625), rel=1e-12)


def test_discrepancy_rejects_nonpositive_delta(exact_cfg):
    with pytest.raises(RejectedInputError):
        discrepancy_norm(SCALAR, F_DELTA, 1.0, exact_cfg, 0.0)


def test_validate_data(exact_cfg):
    token = validate_data(F_DELTA, DELTA, exact_cfg)
    assert token.data_norm == pytest.approx(1.05)
    assert token.target == pytest.approx(0.075)
    with pytest.raises(AssumptionViolationError, match=r'\|\|f_delta\|\| > C\*delta'):
        validate_data([0.0], DELTA, exact_cfg)
    with pytest.raises(AssumptionViolationError):
        validate_data([1.5], 1.0, exact_cfg)  # ||f_delta|| == C*delta


def test_bracket_scalar(exact_cfg):
    bracket = bracket_root(SCALAR, F_DELTA, DELTA, exact_cfg)
    assert bracket.eps_lo < 1.0 / 13.0 < bracket.eps_hi
    assert bracket.lo.discrepancy < 0.075 < bracket.hi.discrepancy
    assert bracket.eps_hi / bracket.eps_lo == pytest.approx(exact_cfg.bracket_factor)
    assert len(bracket.trace) >= 2


def test_bracket_from_small_initial_eps():
    cfg = DiscrepancyConfig(eps_init=1e-6)
    bracket = bracket_root(SCALAR, F_DELTA, DELTA, cfg)
    assert bracket.lo.discrepancy < 0.075 < bracket.hi.discrepancy


def test_bracket_reports_missing_root():
    # second component lies outside the range of A and alone exceeds C*delta
    op = LinearOperator.diagonal([1.0, 0.0])
    cfg = DiscrepancyConfig(max_bracket_steps=20)
    with pytest.raises(NoRootError, match='unsolvable') as info:
        bracket_root(op, [0.1, 1.0], DELTA, cfg)
    assert len(info.value.trace) > 20


def test_solve_scalar_exact():
    cfg = DiscrepancyConfig(root_rel_tol=1e-9)
    solution = solve_for_epsilon(SCALAR, F_DELTA, DELTA, cfg)
    assert solution.epsilon == pytest.approx(1.0 / 13.0, rel=1e-6)
    assert solution.u_delta[0] == pytest.approx(0.975, rel=1e-6)
    assert solution.discrepancy == pytest.approx(0.075, rel=1e-6)
    assert solution.mode == SolverMode.EXACT


def test_solve_scalar_default_tolerance_band(exact_cfg):
    solution = solve_for_epsilon(SCALAR, F_DELTA, DELTA, exact_cfg)
    assert abs(solution.discrepancy - 0.075) <= 1e-6 * 0.075
    assert solution.gap_budget_used == pytest.approx(0.001875, rel=1e-12)


def test_solve_scalar_certified_matches_exact(exact_cfg, cg_cfg):
    exact = solve_for_epsilon(SCALAR, F_DELTA, DELTA, exact_cfg)
    approx = solve_for_epsilon(SCALAR, F_DELTA, DELTA, cg_cfg)
    assert approx.gap_budget_used == pytest.approx((2.25 - 1 - 0.5) * 0.0025, rel=1e-12)
    assert approx.report.certified_gap_bound <= approx.gap_budget_used
    assert approx.u_delta[0] == pytest.approx(exact.u_delta[0], rel=1e-5)


def test_solve_scalar_perturbed_stays_in_band():
    cfg = DiscrepancyConfig(solver_mode=SolverMode.PERTURBED, perturb_seed=3)
    solution = solve_for_epsilon(SCALAR, F_DELTA, DELTA, cfg)
    assert abs(solution.discrepancy - 0.075) <= cfg.root_rel_tol * 0.075
    assert solution.report.certified_gap_bound <= solution.gap_budget_used


def test_scalar_error_decreases_with_delta(exact_cfg):
    problem = build_problem('diagonal', 1)
    errors = []
    for delta in (1e-1, 1e-2, 1e-3):
        observation = make_noisy(problem, delta, direction_policy=DirectionPolicy.AXIS)
        solution = solve_for_epsilon(problem.op, observation.f_delta, delta, exact_cfg)
        errors.append(np.linalg.norm(solution.u_delta - problem.y))
    assert errors[0] > errors[1] > errors[2]


def test_norm_bound_scalar(exact_cfg):
    solution = solve_for_epsilon(SCALAR, F_DELTA, DELTA, exact_cfg)
    assert norm_bound_check(solution, [1.0], DELTA, exact_cfg)
    sharpened = solution.u_delta[0] ** 2 + 0.5 * DELTA ** 2 / solution.epsilon
    assert sharpened == pytest.approx(0.966875, rel=1e-5)
    with pytest.raises(RejectedInputError):
        norm_bound_check(solution, [1.0], 0.0, exact_cfg)


def test_solve_is_deterministic(cg_cfg):
    problem = build_problem('diagonal', 20)
    observation = make_noisy(problem, 1e-3, seed=5)
    first = solve_for_epsilon(problem.op, observation.f_delta, 1e-3, cg_cfg)
    second = solve_for_epsilon(problem.op, observation.f_delta, 1e-3, cg_cfg)
    assert first.epsilon == second.epsilon
    assert first.discrepancy == second.discrepancy
    assert first.iterations_total == second.iterations_total
    assert first.bracket_trace == second.bracket_trace
    np.testing.assert_array_equal(first.u_delta, second.u_delta)


def test_bisection_cap_raises_with_best_iterate():
    cfg = DiscrepancyConfig(root_rel_tol=1e-15, max_bisection_steps=2)
    with pytest.raises(RootToleranceError) as info:
        solve_for_epsilon(SCALAR, F_DELTA, DELTA, cfg)
    assert info.value.best_epsilon > 0
    assert info.value.best_u.shape == (1,)
    assert abs(info.value.best_discrepancy - 0.075) < 0.075


def test_solve_rejects_noise_dominated_data(exact_cfg):
    with pytest.raises(AssumptionViolationError):
        solve_for_epsilon(SCALAR, [1.05], 10.0, exact_cfg)


def test_minimizer_gap_caps_certified_mode(exact_cfg, cg_cfg):
    assert cg_cfg.minimizer_gap(1e-3) == pytest.approx((1e-6 * 1.5e-3 / 4) ** 2, rel=1e-12)
    assert exact_cfg.minimizer_gap(1e-3) == exact_cfg.gap_budget(1e-3)
    # a loose band leaves the gap budget as the binding limit
    loose = DiscrepancyConfig(b=1.2, root_rel_tol=0.9, solver_mode=SolverMode.CERTIFIED)
    assert loose.minimizer_gap(1e-3) == loose.gap_budget(1e-3)


def test_certified_discrepancy_stays_near_exact(exact_cfg, cg_cfg):
    problem = build_problem('diagonal', 10)
    delta = 1e-3
    f_delta = make_noisy(problem, delta, seed=2).f_delta
    quarter_band = cg_cfg.root_rel_tol * cg_cfg.C * delta / 4
    for eps in np.geomspace(1e-8, 1e-2, 25):
        h_cg, report = discrepancy_norm(problem.op, f_delta, eps, cg_cfg, delta)
        h_exact, _ = discrepancy_norm(problem.op, f_delta, eps, exact_cfg, delta)
        assert report.certified_gap_bound <= cg_cfg.minimizer_gap(delta)
        assert abs(h_cg - h_exact) <= quarter_band * (1 + 1e-6) + 1e-15


@pytest.mark.parametrize('n', [10, 50])
def test_certified_solve_lands_in_band(n, cg_cfg):
    problem = build_problem('diagonal', n)
    for delta in DELTAS:
        for seed in range(3):
            f_delta = make_noisy(problem, delta, seed=seed).f_delta
            solution = solve_for_epsilon(problem.op, f_delta, delta, cg_cfg)
            target = cg_cfg.C * delta
            assert abs(solution.discrepancy - target) <= cg_cfg.root_rel_tol * target
            assert solution.gap_budget_used == cg_cfg.gap_budget(delta)


@pytest.mark.parametrize('name,n', GALLERY)
def test_large_eps_limit(name, n, exact_cfg, cg_cfg):
    problem = build_problem(name, n)
    eps = 1e8 * problem.sigma_max ** 2
    for delta in DELTAS:
        f_delta = make_noisy(problem, delta, seed=1).f_delta
        for cfg in (exact_cfg, cg_cfg):
            h, _ = discrepancy_norm(problem.op, f_delta, eps, cfg, delta)
            assert h >= 0.99 * np.linalg.norm(f_delta)


@pytest.mark.slow
@pytest.mark.parametrize('mode', MODES)
@pytest.mark.parametrize('name,n', GALLERY)
def test_gallery_root_band(name, n, mode):
    problem = build_problem(name, n)
    cfg = DiscrepancyConfig(solver_mode=mode)
    y_sq = problem.y @ problem.y
    for delta in DELTAS:
        for seed in range(3):
            f_delta = make_noisy(problem, delta, seed=seed).f_delta
            if mode == SolverMode.EXACT:
                solution = solve_for_epsilon(problem.op, f_delta, delta, cfg)
            else:
                try:
                    solution = solve_for_epsilon(problem.op, f_delta, delta, cfg)
                except DiscrepancySolverError as e:
                    # CG may not certify the tight gap on the worst-conditioned problems
                    assert e.status == 'nonconvergence'
                    continue

            target = cfg.C * delta
            assert abs(solution.discrepancy - target) <= cfg.root_rel_tol * target
            assert solution.gap_budget_used == pytest.approx(cfg.gap_budget(delta), rel=1e-15)
            assert norm_bound_check(solution, problem.y, delta, cfg)
            trace = sorted(solution.bracket_trace)
            for eps, h in trace:
                # h^2 < eps ||y||^2 + (C^2 - b) delta^2
                assert h ** 2 < eps * y_sq + (cfg.C ** 2 - cfg.b) * delta ** 2
            if mode == SolverMode.EXACT:
                scale = np.linalg.norm(f_delta)
                for (_, h_small), (_, h_large) in zip(trace, trace[1:]):
                    assert h_large >= h_small - 1e-12 * scale
