import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracsoliton.errors import DataError, DegenerateProfileError, DomainError
from fracsoliton.specfun import ProblemParams
from fracsoliton.spectral import (Grid, Profile, apply_multiplier, apply_resolvent, apply_riesz,
                                  derivative, functional_J, integrate, nonlinearity,
                                  profile_from_csv, profile_from_json, profile_to_csv,
                                  profile_to_json, residual)


def lorentzian(grid):
    return Profile.from_function(grid, lambda x: 2.0 / (1.0 + x * x))


def test_grid_invariants():
    g = Grid(10.0, 64)
    assert g.spacing * g.n_points == pytest.approx(2 * g.half_length)
    assert g.x[0] == -10.0 and g.x[32] == 0.0
    assert g.wavenumbers[1] == pytest.approx(np.pi / 10)
    assert g.frequencies.min() == pytest.approx(-32 * np.pi / 10)
    for bad in [(10.0, 48), (10.0, 8), (-1.0, 64)]:
        with pytest.raises(DomainError):
            Grid(*bad)


def test_profile_rejects_bad_values():
    g = Grid(5.0, 16)
    with pytest.raises(DataError):
        Profile(g, np.full(16, np.nan))
    with pytest.raises(DataError):
        Profile(g, np.zeros(15))
    u = Profile(g, np.zeros(16))
    with pytest.raises(ValueError):
        u.values[0] = 1.0


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.7])
def test_riesz_eigenfunction(alpha):
    g = Grid(20.0, 256)
    omega = 7 * np.pi / g.half_length
    u = Profile.from_function(g, lambda x: np.cos(omega * x))
    np.testing.assert_allclose(apply_riesz(u, alpha).values, omega ** alpha * u.values, atol=1e-12)
    const = Profile(g, np.full(256, 3.0))
    np.testing.assert_allclose(apply_riesz(const, alpha).values, 0.0, atol=1e-12)


def test_riesz_rejects_order():
    g = Grid(5.0, 16)
    with pytest.raises(DomainError):
        apply_riesz(Profile(g, np.zeros(16)), 2.5)


def test_resolvent_examples():
    g = Grid(20.0, 256)
    alpha = 1.3
    const = Profile(g, np.full(256, 2.5))
    np.testing.assert_allclose(apply_resolvent(const, alpha).values, 2.5, rtol=1e-14)
    omega = 5 * np.pi / g.half_length
    u = Profile.from_function(g, lambda x: np.cos(omega * x))
    back = (1 + omega ** alpha) * apply_resolvent(u, alpha).values
    np.testing.assert_allclose(back, u.values, atol=1e-13)


def test_resolvent_inverts_identity_plus_riesz():
    g = Grid(30.0, 512)
    u = Profile.from_function(g, lambda x: np.exp(-x * x / 4) * (1 + 0.3 * np.sin(x)))
    lu = u.with_values(u.values + apply_riesz(u, 1.4).values)
    assert np.max(np.abs(apply_resolvent(lu, 1.4).values - u.values)) <= 1e-10


def test_lorentzian_riesz_identity_converges_with_box():
    # |D| 2/(1+x^2) = 2(1-x^2)/(1+x^2)^2 in the continuum.  On the periodic box
    # the missing tail mass leaves an offset that scales as 1/L^2.
    errs = []
    for L, n in [(200.0, 2 ** 14), (400.0, 2 ** 15)]:
        g = Grid(L, n)
        x = g.x
        d = apply_riesz(lorentzian(g), 1.0).values - 2 * (1 - x * x) / (1 + x * x) ** 2
        errs.append(np.max(np.abs(d[np.abs(x) < L / 2])))
    assert errs[0] <= 2.5 / 200.0 ** 2
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_derivative_of_gaussian():
    g = Grid(20.0, 512)
    u = Profile.from_function(g, lambda x: np.exp(-x * x))
    x = g.x
    np.testing.assert_allclose(derivative(u, 1).values, -2 * x * np.exp(-x * x), atol=1e-12)
    np.testing.assert_allclose(derivative(u, 2).values, (4 * x * x - 2) * np.exp(-x * x), atol=1e-11)


def test_nonlinearity_kinds():
    g = Grid(5.0, 16)
    u = Profile(g, np.linspace(-2, 2, 16))
    sp3 = nonlinearity(u, ProblemParams(1.5, 3.0))
    assert sp3.values[0] == pytest.approx(-8.0)
    ip2 = nonlinearity(u, ProblemParams(1.5, 2.0, "integer_power"))
    assert ip2.values[0] == pytest.approx(4.0)
    pos = Profile(g, np.linspace(0, 2, 16))
    np.testing.assert_array_equal(nonlinearity(pos, ProblemParams(1.5, 2.0)).values,
                                  nonlinearity(pos, ProblemParams(1.5, 2.0, "integer_power")).values)


def test_residual_zero_profile():
    g = Grid(5.0, 16)
    r, m = residual(Profile(g, np.zeros(16)), ProblemParams(1.0, 2.0))
    assert m == 0.0
    assert not np.any(r.values)


def test_residual_benjamin_ono_tail_wrap():
    params = ProblemParams(1.0, 2.0, "integer_power")
    _, r400 = residual(lorentzian(Grid(400.0, 2 ** 15)), params)
    _, r800 = residual(lorentzian(Grid(800.0, 2 ** 16)), params)
    # the residual is the tail-wrap offset, about 3 / L^2
    assert r400 <= 2e-5
    assert r800 <= 1e-5


def test_residual_sech2_boundary():
    params = ProblemParams(2.0, 2.0, "integer_power", boundary=True)
    u = Profile.from_function(Grid(60.0, 2 ** 12), lambda x: 1.5 / np.cosh(x / 2) ** 2)
    _, r = residual(u, params)
    assert r <= 1e-8


def test_functional_J_scaling():
    params = ProblemParams(1.5, 2.0)
    g = Grid(100.0, 2 ** 12)
    u = Profile.from_function(g, lambda x: (1 + x * x) ** -1.25)
    j = functional_J(u, params)
    # homogeneous of degree two in amplitude, invariant under dilation
    assert functional_J(u.with_values(3 * u.values), params) == pytest.approx(9 * j, rel=1e-12)
    wide = Profile.from_function(g, lambda x: (1 + x * x / 4) ** -1.25)
    assert functional_J(wide, params) == pytest.approx(j, rel=1e-3)


def test_functional_J_benjamin_ono_and_degenerate():
    params = ProblemParams(1.0, 2.0, "integer_power")
    j = functional_J(lorentzian(Grid(200.0, 2 ** 14)), params)
    assert np.isfinite(j) and j > 0
    with pytest.raises(DegenerateProfileError):
        functional_J(Profile(Grid(5.0, 16), np.zeros(16)), params)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_round_trip_and_linearity(seed):
    rng = np.random.default_rng(seed)
    g = Grid(8.0, 128)
    u, v = (Profile(g, rng.standard_normal(128)) for _ in range(2))
    same = apply_multiplier(u, lambda xi: np.ones_like(xi))
    assert np.linalg.norm(same.values - u.values) <= 1e-12 * np.linalg.norm(u.values)
    a, b = rng.standard_normal(2)
    lhs = apply_riesz(u.with_values(a * u.values + b * v.values), 1.3).values
    rhs = a * apply_riesz(u, 1.3).values + b * apply_riesz(v, 1.3).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))
    w = u.with_values(u.values - u.values.mean())
    assert np.linalg.norm(apply_resolvent(w, 0.7).values) <= np.linalg.norm(w.values)


def test_integrate_trapezoid():
    g = Grid(30.0, 1024)
    assert integrate(np.exp(-g.x ** 2), g) == pytest.approx(np.sqrt(np.pi), rel=1e-13)


def test_csv_round_trip(tmp_path):
    g = Grid(12.5, 64)
    u = Profile.from_function(g, lambda x: np.exp(-x * x) + 1e-3 * x)
    path = tmp_path / "u.csv"
    profile_to_csv(u, path)
    back = profile_from_csv(path)
    assert back.grid == g
    np.testing.assert_allclose(back.values, u.values, rtol=1e-14, atol=1e-300)
    text = profile_to_csv(u)
    assert text.splitlines()[0] == "x,value"
    assert profile_from_csv(io.StringIO(text)).grid == g


def test_csv_rejects_bad_header():
    with pytest.raises(DataError):
        profile_from_csv("a,b\n1,2\n")


def test_json_round_trip():
    g = Grid(50.0, 256)
    params = ProblemParams(1.2, 3.0, "integer_power")
    u = Profile.from_function(g, lambda x: 1 / (1 + x * x))
    doc = json.loads(profile_to_json(u, params))
    assert set(doc) >= {"alpha", "p", "kind", "L", "N", "values"}
    back, bparams = profile_from_json(profile_to_json(u, params))
    np.testing.assert_array_equal(back.values, u.values)
    assert bparams == params
    assert back.grid == g
