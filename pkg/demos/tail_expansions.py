"""
Tail expansions of ground states
================================

Ground states inherit the kernel's algebraic tail,
``Q(x) ~ a1 / x^(alpha+1)`` with ``a1 = k1 * int f(Q)``.  The next correction
is either the nonlinear echo ``a1^p / x^(p(alpha+1))`` or the dispersive term
``a2 / x^(2 alpha + 1)``, whichever decays more slowly.
"""
from fracsoliton import asymptotics as asy
from fracsoliton.groundstate import solve_ground_state
from fracsoliton.specfun import ProblemParams
from fracsoliton.spectral import Grid

grid = Grid(400.0, 2 ** 15)
for alpha, p in [(1.5, 1.2), (1.0, 1.5), (1.5, 3.0)]:
    params = ProblemParams(alpha, p)
    q, _ = solve_ground_state(params, grid)
    c = asy.tail_coefficients(q, params)
    regime = asy.classify_regime(params)
    first = asy.verify_first_order(q, params, c)
    second = asy.verify_second_order(q, params, c)
    print(f"alpha={alpha}, p={p}: {regime.value.value}")
    print(f"  a1 fitted {first.fitted_coefficient:.6f}, predicted {first.predicted_coefficient:.6f}")
    print(f"  residual order {second.fitted_exponent:.2f} (predicted {regime.predicted_residual_exponent:.2f}),"
          f" coefficient {second.fitted_coefficient:.4f} vs {second.predicted_coefficient:.4f}")

# For p = 3 the expansion goes one step further.
params = ProblemParams(1.5, 3.0)
q, _ = solve_ground_state(params, grid)
rq, rqp = asy.verify_cubic_third_order(q, params)
print(f"cubic: residual order after three terms {rq.fitted_exponent:.2f}, a3 error {rq.relative_error:.1%}")
