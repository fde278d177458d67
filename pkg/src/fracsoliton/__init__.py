"""Ground states of fractional dispersive equations and their algebraic tails."""
from .errors import (AccuracyError, ConvergenceError, DataError, DegenerateProfileError,
                     DomainError, FitDomainError, FracSolitonError, InstabilityError,
                     PreconditionError, SingularityError, UnsupportedRegimeError)
from .specfun import (EvalOptions, KernelSeries, Nonlinearity, ProblemParams, critical_exponent,
                      h_eval, k_eval, k_fourier_eval, k_prime_eval, k_series_eval,
                      kernel_coefficient, kernel_integral, kernel_series)
from .spectral import Grid, Profile, apply_resolvent, apply_riesz, functional_J, residual
from .groundstate import ConvergenceReport, SolverOptions, solve_ground_state
from .asymptotics import (RegimeClass, TailCoefficients, TailReport, classify_regime,
                          tail_coefficients, verify_cubic_third_order, verify_derivative_order,
                          verify_first_order, verify_second_order)

__version__ = "0.1.0"
