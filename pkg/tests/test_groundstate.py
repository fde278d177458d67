import numpy as np
import pytest

from conftest import ground_state
from fracsoliton.errors import (ConvergenceError, DegenerateProfileError, DomainError,
                                PreconditionError)
from fracsoliton.groundstate import (SolverOptions, center_profile, initial_profile, iterate_step,
                                     peak_offset, solve_ground_state)
from fracsoliton.specfun import ProblemParams
from fracsoliton.spectral import Grid, Profile, functional_J

KDV = ProblemParams(2.0, 2.0, "integer_power", boundary=True)


def sech2(x):
    return 1.5 / np.cosh(x / 2) ** 2


def test_benjamin_ono_recovery():
    _, q, report = ground_state(1.0, 2.0, "integer_power")
    assert np.max(np.abs(q.values - 2 / (1 + q.x ** 2))) <= 1e-4
    assert report.final_residual == report.residual_history[-1]
    assert abs(report.final_m - 1) <= 1e-12


@pytest.mark.parametrize("init", ["sech2", "lorentzian"])
def test_kdv_boundary_recovery(init):
    grid = Grid(60.0, 2 ** 12)
    q, _ = solve_ground_state(KDV, grid, SolverOptions(init=init))
    assert np.max(np.abs(q.values - sech2(grid.x))) <= 1e-6


def test_ground_state_shape():
    _, q, _ = ground_state(1.5, 2.0)
    v = q.values
    n = len(v)
    assert np.all(v > 0)
    np.testing.assert_array_equal(v, np.roll(v[::-1], 1))
    assert np.all(np.diff(v[n // 2:]) <= 0)
    assert abs(peak_offset(q)) < 1e-12


def test_J_lower_at_ground_state_than_initial_guess():
    params, q, _ = ground_state(1.5, 2.0)
    start = initial_profile(params, q.grid, SolverOptions())
    assert functional_J(q, params) < functional_J(start, params)


def test_iterate_step_fixed_point():
    grid = Grid(60.0, 2 ** 12)
    exact = Profile.from_function(grid, sech2)
    w, m = iterate_step(exact, KDV, 2.0)
    assert abs(m - 1) <= 1e-8
    assert np.max(np.abs(w.values - exact.values)) <= 1e-8
    params, q, _ = ground_state(1.5, 2.0)
    w, m = iterate_step(q, params, 2.0)
    assert abs(m - 1) <= 1e-8
    assert np.max(np.abs(w.values - q.values)) <= 1e-8


def test_iterate_step_amplitude_homogeneity():
    grid = Grid(60.0, 2 ** 12)
    u = Profile.from_function(grid, sech2)
    _, m1 = iterate_step(u, KDV, 2.0)
    _, m2 = iterate_step(u.with_values(2 * u.values), KDV, 2.0)
    assert m2 / m1 == pytest.approx(0.5, rel=1e-12)


def test_iterate_step_preserves_parity():
    grid = Grid(50.0, 2 ** 11)
    params = ProblemParams(1.3, 2.5)
    u = Profile.from_function(grid, lambda x: 1 / (1 + x * x))
    w, _ = iterate_step(u, params, params.p / (params.p - 1))
    np.testing.assert_allclose(w.values, np.roll(w.values[::-1], 1), atol=1e-14)


def test_iterate_step_degenerate():
    grid = Grid(10.0, 256)
    with pytest.raises(DegenerateProfileError):
        iterate_step(Profile(grid, np.zeros(256)), ProblemParams(1.5, 2.0), 2.0)


def test_convergence_error_carries_report():
    grid = Grid(100.0, 2 ** 12)
    with pytest.raises(ConvergenceError) as info:
        solve_ground_state(ProblemParams(1.5, 2.0), grid, SolverOptions(max_iter=3))
    assert info.value.report.iterations == 3
    assert info.value.profile is not None


def test_spacing_precondition():
    with pytest.raises(PreconditionError):
        solve_ground_state(ProblemParams(1.5, 2.0), Grid(400.0, 2 ** 12))


def test_solver_options_validation():
    with pytest.raises(DomainError):
        SolverOptions(gamma=1.0)
    with pytest.raises(DomainError):
        SolverOptions(tol_residual=0.0)
    with pytest.raises(DomainError):
        SolverOptions(init="custom")
    assert SolverOptions().resolved_gamma(3.0) == pytest.approx(1.5)


def test_custom_initial_guess_and_centering():
    grid = Grid(60.0, 2 ** 12)
    opts = SolverOptions(init="custom", custom_init=lambda x: np.exp(-x * x / 8))
    q, _ = solve_ground_state(KDV, grid, opts)
    assert np.max(np.abs(q.values - sech2(grid.x))) <= 1e-6
    shifted = Profile(grid, np.roll(q.values, 37))
    np.testing.assert_array_equal(center_profile(shifted).values, q.values)
