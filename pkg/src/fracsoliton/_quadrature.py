"""Quadrature helpers: sequence acceleration and Fourier-type integrals."""
import warnings

import numpy as np
from scipy import integrate


def wynn_epsilon(partial_sums):
    """Accelerate a sequence of partial sums with Wynn's epsilon algorithm.

    Returns the last even-column estimate together with a crude error
    estimate (difference between the two most recent estimates).
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    if n < 3:
        return s[-1], np.inf
    prev = np.zeros(n + 1)
    cur = s.copy()
    estimates = [s[-1]]
    k = 0
    while len(cur) > 1:
        diff = np.diff(cur)
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = prev[1:len(cur)] + 1.0 / diff
        prev, cur = cur, nxt
        k += 1
        if not np.all(np.isfinite(cur)):
            break
        if k % 2 == 0:
            estimates.append(cur[-1])
    if len(estimates) < 2:
        return estimates[-1], np.inf
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def quad(f, a, b, rel_tol, abs_tol=0.0, limit=400, points=None):
    """``scipy.integrate.quad`` with warnings folded into the error estimate."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=abs_tol, epsrel=max(rel_tol, 1e-13),
                                  limit=limit, points=points)
    return val, err


def cosine_integral(g, omega, rel_tol, min_terms=12, max_terms=4000, start=0.0):
    """Integrate ``g(s) cos(omega s)`` over ``[start, inf)``.

    The half-line is cut at consecutive zeros of the cosine; each piece is
    integrated adaptively and the alternating partial sums are accelerated
    with the epsilon algorithm.  ``g`` must be non-oscillatory and decay (at
    any rate) at infinity.

    Returns ``(value, error_estimate)``; per-piece quadrature errors are
    combined in quadrature since they do not add coherently.
    """
    if omega == 0.0:
        val, err = quad(g, start, np.inf, rel_tol)
        return val, err
    omega = abs(omega)
    half = np.pi / omega
    f = lambda s: g(s) * np.cos(omega * s)
    # first zero of cos(omega s) beyond start
    m0 = np.floor(start / half - 0.5) + 1
    z = (m0 + 0.5) * half
    val, err = quad(f, start, z, 1e-13)
    sums = [val]
    err_sq = err ** 2
    scale = abs(val)
    best, best_err = val, np.inf
    for m in range(1, max_terms + 1):
        piece, e = quad(f, z, z + half, 1e-13)
        z += half
        sums.append(sums[-1] + piece)
        err_sq += e * e
        scale = max(scale, abs(piece))
        if m >= min_terms:
            # plain convergence for rapidly decaying integrands
            if abs(piece) <= 1e-3 * rel_tol * abs(sums[-1]):
                return sums[-1], np.sqrt(err_sq) + abs(piece)
            est, est_err = wynn_epsilon(sums[-min(len(sums), 40):])
            if est_err <= rel_tol * abs(est) * 0.1:
                return est, est_err + np.sqrt(err_sq)
            if est_err < best_err:
                best, best_err = est, est_err
    return best, best_err + np.sqrt(err_sq)
