"""Ground states of ``|D|^alpha Q + Q = f(Q)`` by Petviashvili iteration.

The fixed-point form ``Q = k * f(Q)`` (convolution with the resolvent kernel)
is iterated with the stabilising factor ``M^gamma`` that removes the unstable
amplitude direction.  Iterates are kept even by reflection about ``x = 0``.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConvergenceError, DegenerateProfileError, DomainError,
                     InstabilityError, PreconditionError)
from .spectral import Grid, Profile, apply_resolvent, apply_riesz, integrate, nonlinearity, residual

__all__ = ["InitialGuess", "SolverOptions", "ConvergenceReport", "iterate_step",
           "initial_profile", "center_profile", "peak_offset", "solve_ground_state"]


class InitialGuess(str, enum.Enum):
    LORENTZIAN = "lorentzian"
    SECH2 = "sech2"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls.

    ``gamma=None`` selects ``p / (p - 1)``.  ``custom_init`` is a callable of
    ``x`` used when ``init='custom'``.
    """

    max_iter: int = 2000
    tol_residual: float = 1e-10
    tol_m: float = 1e-12
    gamma: float | None = None
    init: InitialGuess = InitialGuess.LORENTZIAN
    amplitude: float = 2.0
    custom_init: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "init", InitialGuess(self.init))
        if not self.tol_residual > 0 or not self.tol_m > 0:
            raise DomainError("tolerances must be positive")
        if self.gamma is not None and not self.gamma > 1:
            raise DomainError("gamma must exceed 1")
        if self.max_iter < 1:
            raise DomainError("max_iter must be positive")
        if self.init is InitialGuess.CUSTOM and self.custom_init is None:
            raise DomainError("init='custom' needs custom_init")

    def resolved_gamma(self, p):
        return self.gamma if self.gamma is not None else p / (p - 1.0)

    def to_dict(self):
        return {"max_iter": self.max_iter, "tol_residual": self.tol_residual,
                "tol_m": self.tol_m, "gamma": self.gamma, "init": self.init.value}


@dataclass
class ConvergenceReport:
    iterations: int
    final_residual: float
    final_m: float
    residual_history: list

    def to_dict(self):
        return {"iterations": self.iterations, "final_residual": self.final_residual,
                "final_m": self.final_m, "residual_history": list(self.residual_history)}


def iterate_step(u, params, gamma):
    """One stabilised step; returns ``(M**gamma * k*f(u), M)``."""
    fu = nonlinearity(u, params)
    denom = integrate(u.values * fu.values, u.grid)
    if denom == 0.0:
        raise DegenerateProfileError("<u, f(u)> vanishes")
    lu = apply_riesz(u, params.alpha).values + u.values
    m = integrate(u.values * lu, u.grid) / denom
    w = apply_resolvent(fu, params.alpha).values
    if m <= 0 or not np.isfinite(m):
        raise InstabilityError(f"stabilising factor became {m}")
    return Profile(u.grid, m ** gamma * w), m


def initial_profile(params, grid, opts):
    x = grid.x
    if opts.init is InitialGuess.LORENTZIAN:
        v = opts.amplitude / (1.0 + x * x) ** ((params.alpha + 1.0) / 2.0)
    elif opts.init is InitialGuess.SECH2:
        v = opts.amplitude / np.cosh(x / 2.0) ** 2
    else:
        v = np.asarray(opts.custom_init(x), dtype=float)
    return Profile(grid, v)


def _symmetrize(v):
    return 0.5 * (v + np.roll(v[::-1], 1))


def center_profile(u):
    """Circularly shift ``u`` so that its maximum sits at ``x = 0`` (index N/2)."""
    n = u.grid.n_points
    shift = n // 2 - int(np.argmax(u.values))
    return Profile(u.grid, np.roll(u.values, shift))


def peak_offset(u):
    """Sub-grid position of the maximum from a parabola through three samples."""
    v = u.values
    i = int(np.argmax(v))
    n = len(v)
    ym, y0, yp = v[(i - 1) % n], v[i], v[(i + 1) % n]
    curv = ym - 2 * y0 + yp
    frac = 0.0 if curv == 0 else 0.5 * (ym - yp) / curv
    return u.grid.x[i] + frac * u.grid.spacing


def solve_ground_state(params, grid, opts=None):
    """Iterate to the positive even ground state.

    Returns ``(profile, report)``.  Raises :class:`ConvergenceError` after
    ``max_iter`` steps and :class:`InstabilityError` on non-finite iterates.
    """
    opts = opts or SolverOptions()
    if grid.spacing > 0.1:
        raise PreconditionError(f"grid spacing {grid.spacing:.3g} exceeds 0.1")
    gamma = opts.resolved_gamma(params.p)
    u = initial_profile(params, grid, opts)
    history = []
    m = math.nan
    for it in range(1, opts.max_iter + 1):
        try:
            with np.errstate(over="raise", invalid="raise"):
                nxt, m = iterate_step(u, params, gamma)
        except FloatingPointError as exc:
            raise InstabilityError(f"iteration {it}: {exc}") from exc
        vals = _symmetrize(nxt.values)
        if not np.all(np.isfinite(vals)):
            raise InstabilityError(f"non-finite iterate at step {it}")
        u = Profile(grid, vals)
        res = residual(u, params)[1]
        history.append(res)
        if res <= opts.tol_residual and abs(m - 1.0) <= opts.tol_m:
            break
    report = ConvergenceReport(len(history), history[-1], float(m), history)
    u = center_profile(u)
    if not (report.final_residual <= opts.tol_residual and abs(m - 1.0) <= opts.tol_m):
        raise ConvergenceError(
            f"no convergence after {opts.max_iter} iterations "
            f"(residual {report.final_residual:.3g}, |M-1| {abs(m - 1):.3g})", report, u)
    return u, report
