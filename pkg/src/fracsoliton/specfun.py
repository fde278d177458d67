"""Resolvent kernel of ``1 + |D|^alpha`` in one dimension.

The kernel ``k`` is the inverse Fourier transform of ``1 / (1 + |xi|^alpha)``.
It is evaluated through the auxiliary function

    h(y) = int_0^inf cos(y eta) exp(-eta^alpha) d eta,

using the subordination formula

    k(x) = (1/pi) int_0^inf exp(-s) s^(-1/alpha) h(x s^(-1/alpha)) ds.

Substituting ``t = x s^(-1/alpha)`` turns this into a positive integral over
``t`` with an ``exp(-(x/t)^alpha)`` cut-off, which is computed on a fixed set
of Gauss-Legendre nodes in ``log t``.  The values of ``h`` on those nodes come
from rotated-contour integrals (no oscillation) and, for large ``t``, from the
optimally truncated asymptotic series.  They are cached per ``alpha`` so that
the kernel can be evaluated on whole arrays at negligible extra cost.

An independent route, a direct Fourier integral with sequence acceleration,
is provided by :func:`k_fourier_eval`.
"""
import csv
import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import _quadrature
from .errors import (AccuracyError, DomainError, SingularityError,
                     UnsupportedRegimeError)

__all__ = [
    "Nonlinearity", "ProblemParams", "KernelSeries", "EvalOptions",
    "critical_exponent", "kernel_coefficient", "kernel_series",
    "h_eval", "h_eval_rotated", "h_series_eval",
    "k_eval", "k_prime_eval", "k_series_eval", "k_series_prime_eval",
    "k_fourier_eval", "kernel_integral", "fit_kernel_coefficients",
    "tabulate_kernel", "write_kernel_csv",
]

# default switch points between quadrature and asymptotic series
H_CROSSOVER = 10.0
K_CROSSOVER = 8.0

# log-t panels used by the kernel quadrature
_PANEL_WIDTH = 0.5
_PANEL_NODES = 20
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_PANEL_NODES)
# exp(-(x/t)^alpha) < exp(-_CUTOFF) is dropped
_CUTOFF = 45.0
_T_MAX = 1e8


class Nonlinearity(str, enum.Enum):
    SIGNED_POWER = "signed_power"      # f(u) = |u|^(p-1) u
    INTEGER_POWER = "integer_power"    # f(u) = u^p, p integer


def critical_exponent(alpha):
    """Upper end ``p*(alpha)`` of the admissible range of ``p``.

    Equals ``2 alpha / (1 - alpha) + 1`` for ``alpha < 1`` and ``inf``
    otherwise.
    """
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if alpha >= 1.0:
        return math.inf
    return 2.0 * alpha / (1.0 - alpha) + 1.0


@dataclass(frozen=True)
class ProblemParams:
    """Dispersion order, nonlinearity exponent and nonlinearity kind.

    ``boundary=True`` admits ``alpha = 2`` (the classical KdV soliton) so that
    solvers can be validated against closed forms; it is not a physical
    regime of the fractional problem.
    """

    alpha: float
    p: float
    kind: Nonlinearity = Nonlinearity.SIGNED_POWER
    boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Nonlinearity(self.kind))
        a, p = float(self.alpha), float(self.p)
        if self.boundary:
            if a != 2.0:
                raise DomainError("boundary=True is reserved for alpha = 2")
        else:
            pstar = critical_exponent(a)
            if not 1.0 < p < pstar:
                raise DomainError(
                    f"p = {p} outside the subcritical range (1, {pstar:g}) for alpha = {a}")
        if p <= 1.0:
            raise DomainError(f"p must exceed 1, got {p}")
        if self.kind is Nonlinearity.INTEGER_POWER and (p != round(p) or p < 2):
            raise DomainError(f"integer_power requires an integer p >= 2, got {p}")

    def to_dict(self):
        return {"alpha": float(self.alpha), "p": float(self.p), "kind": self.kind.value}


@dataclass(frozen=True)
class EvalOptions:
    """Accuracy and switching controls for kernel evaluation.

    ``crossover_x=None`` selects the defaults (10 for ``h``, 8 for ``k``).
    Beyond the crossover the asymptotic series is used only if its own
    truncation estimate is below ``quad_rel_tol``; otherwise quadrature is
    kept, which moves the effective crossover outward for small ``alpha``.
    Pass ``crossover_x=math.inf`` to force quadrature everywhere.
    """

    quad_rel_tol: float = 1e-10
    crossover_x: float | None = None
    series_terms: int = 2

    def __post_init__(self):
        if not self.quad_rel_tol > 0:
            raise DomainError("quad_rel_tol must be positive")
        if self.crossover_x is not None and not self.crossover_x > 1:
            raise DomainError("crossover_x must exceed 1")
        if self.series_terms < 1:
            raise DomainError("series_terms must be positive")

    def crossover(self, default):
        return default if self.crossover_x is None else self.crossover_x


def _check_alpha(alpha, allow_two=False):
    upper_ok = alpha <= 2.0 if allow_two else alpha < 2.0
    if not (alpha > 0.0 and upper_ok):
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")


# ---------------------------------------------------------------------------
# expansion coefficients

def kernel_coefficient(n, alpha):
    """Coefficient ``k_n`` of ``|x|^-(n alpha + 1)`` in the large-x expansion of k.

    ``k_1 = sin(pi alpha/2) Gamma(alpha+1)/pi`` and
    ``k_2 = -sin(pi alpha) Gamma(2 alpha+1)/pi``.  For ``n >= 3`` the same
    pattern ``(-1)^(n+1) sin(n pi alpha/2) Gamma(n alpha+1)/pi`` is returned;
    see :func:`fit_kernel_coefficients` for a numerical check of it.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"n must be a positive integer, got {n}")
    _check_alpha(alpha, allow_two=True)
    return (-1) ** (n + 1) * math.sin(n * math.pi * alpha / 2) * special.gamma(n * alpha + 1) / math.pi


@dataclass(frozen=True)
class KernelSeries:
    """Truncated large-x expansion ``sum_{n<=N} k_n / |x|^(n alpha + 1)``."""

    alpha: float
    coeffs: tuple
    n_terms: int
    extrapolated: tuple = field(default=())

    @property
    def error_order(self):
        """Power of ``1/|x|`` bounding the truncation error."""
        return (self.n_terms + 1) * self.alpha + 1


def kernel_series(alpha, n_terms=2):
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    coeffs = tuple(kernel_coefficient(n, alpha) for n in range(1, n_terms + 1))
    return KernelSeries(alpha=alpha, coeffs=coeffs, n_terms=n_terms,
                        extrapolated=tuple(n >= 3 for n in range(1, n_terms + 1)))


def k_series_eval(x, series):
    """Evaluate the truncated kernel expansion; requires ``|x| > 1``."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if np.any(ax <= 1.0):
        raise DomainError("the kernel expansion is only used for |x| > 1")
    a = series.alpha
    out = sum(c * ax ** (-(n * a + 1)) for n, c in enumerate(series.coeffs, start=1))
    return out if out.ndim else float(out)


def k_series_prime_eval(x, series):
    """Termwise derivative ``-sign(x) sum (n alpha + 1) k_n / |x|^(n alpha + 2)``."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if np.any(ax <= 1.0):
        raise DomainError("the kernel expansion is only used for |x| > 1")
    a = series.alpha
    out = -np.sign(x) * sum((n * a + 1) * c * ax ** (-(n * a + 2))
                            for n, c in enumerate(series.coeffs, start=1))
    return out if out.ndim else float(out)


def _next_term_estimate(alpha, n_terms, ax, shift):
    """Magnitude of the first omitted non-zero series term (error proxy)."""
    for n in range(n_terms + 1, n_terms + 4):
        c = kernel_coefficient(n, alpha)
        if abs(c) > 1e-14 * special.gamma(n * alpha + 1):
            return abs(c) * ax ** (-(n * alpha + shift))
    return 0.0


# ---------------------------------------------------------------------------
# the auxiliary function h

def _h_coefficients(alpha, nmax):
    n = np.arange(1, nmax + 1)
    # pi k_n / n!
    return n, (-1.0) ** (n + 1) * np.sin(n * np.pi * alpha / 2) * np.exp(
        special.gammaln(n * alpha + 1) - special.gammaln(n + 1))


def h_series_eval(y, alpha, n_terms=None):
    """Asymptotic series of ``h`` for large ``|y|``.

    With ``n_terms=None`` the series is truncated optimally (just before its
    smallest term, at most 80 terms).
    """
    y = np.abs(np.atleast_1d(np.asarray(y, dtype=float)))
    nmax = 80 if n_terms is None else n_terms
    n, c = _h_coefficients(alpha, nmax)
    logy = np.log(y)
    terms = c[:, None] * np.exp(-(n[:, None] * alpha + 1) * logy[None, :])
    if n_terms is None:
        logenv = (special.gammaln(n * alpha + 1) - special.gammaln(n + 1))[:, None] \
            - n[:, None] * alpha * logy[None, :]
        nstop = np.argmin(logenv, axis=0) + 1
        terms = np.where(n[:, None] <= nstop[None, :], terms, 0.0)
    return terms.sum(axis=0)


@functools.lru_cache(maxsize=64)
def _series_threshold(alpha):
    """Smallest y from which the optimally truncated h series is exact to ~1e-17."""
    n = np.arange(1, 121)
    for y in (10.0, 15.0, 20.0, 30.0, 40.0, 60.0, 100.0, 200.0):
        logenv = special.gammaln(n * alpha + 1) - special.gammaln(n + 1) - n * alpha * math.log(y)
        if logenv.min() - logenv[0] < math.log(1e-17):
            return y
    return 400.0


def _h_ray(t, alpha, rel_tol):
    """h(t) from the half line rotated by theta = min(pi/2, pi/(4 alpha)).

    Accurate for small and moderate t (no cancellation as t -> 0).
    """
    th = min(math.pi / 2, math.pi / (4 * alpha))
    ca, sa = math.cos(alpha * th), math.sin(alpha * th)
    st, ct = math.sin(th), math.cos(th)

    def f(r):
        return math.exp(-t * r * st - r ** alpha * ca) * math.cos(th + t * r * ct - r ** alpha * sa)

    R = (_CUTOFF / ca) ** (1 / alpha)
    if t > 0:
        R = min(R, _CUTOFF / (t * st))
    return _quadrature.quad(f, 0.0, R, rel_tol, abs_tol=1e-17, limit=500)


def _rotated_integral(y, alpha, rel_tol):
    """``y^(1+alpha) h(y)`` from the contour rotated by pi alpha / 4."""
    c4, s4 = math.cos(math.pi * alpha / 4), math.sin(math.pi * alpha / 4)
    ya = y ** alpha
    inv_a = 1.0 / alpha
    r2 = math.sqrt(0.5)
    phase = math.pi * alpha / 4

    def f(r):
        ra = r ** inv_a * r2
        return math.exp(-ra - r * c4 / ya) * math.sin(ra - r * s4 / ya + phase)

    R = (_CUTOFF / r2) ** alpha
    if c4 > 0:
        R = min(R, _CUTOFF * ya / c4)
    return _quadrature.quad(f, 0.0, R, rel_tol, abs_tol=1e-17 * min(1.0, ya), limit=500)


def _elementwise(fn, y, *args):
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 0:
        return fn(float(arr), *args)
    return np.array([fn(float(v), *args) for v in arr.ravel()]).reshape(arr.shape)


def h_eval_rotated(y, alpha, opts=None):
    """h(y) through the non-oscillatory contour-rotated integral.

    The half line of the oscillatory integral is rotated by ``pi alpha/4``,
    giving ``y^(1+alpha) h(y)`` as the imaginary part of an absolutely
    convergent integral; the result is divided by ``y^(1+alpha)``.
    Accepts scalars or arrays.
    """
    opts = opts or EvalOptions()
    _check_alpha(alpha, allow_two=True)
    return _elementwise(_h_rotated_scalar, y, alpha, opts)


def _h_rotated_scalar(y, alpha, opts):
    y = abs(y)
    if y == 0.0:
        raise DomainError("the rotated representation requires y != 0")
    val, err = _rotated_integral(y, alpha, opts.quad_rel_tol * 1e-2)
    if err > opts.quad_rel_tol * abs(val):
        raise AccuracyError("rotated-contour quadrature for h", err / abs(val))
    return val / y ** (1 + alpha)


def h_eval(y, alpha, opts=None):
    """h(y) by direct quadrature of the damped cosine integral.

    For moderate ``|y|`` the half line is cut at the zeros of ``cos(y eta)``
    and the alternating partial sums are accelerated.  Beyond the crossover
    the asymptotic expansion with ``opts.series_terms`` terms is used, but
    only when its truncation estimate is below ``opts.quad_rel_tol``.
    ``alpha = 2`` is accepted (Gaussian case) for cross-checks.  Accepts
    scalars or arrays.
    """
    opts = opts or EvalOptions()
    _check_alpha(alpha, allow_two=True)
    return _elementwise(_h_scalar, y, alpha, opts)


def _h_scalar(y, alpha, opts):
    y = abs(y)
    if alpha < 2.0 and y > opts.crossover(H_CROSSOVER):
        val = float(h_series_eval(y, alpha, opts.series_terms)[0])
        est = math.pi * _next_term_estimate(alpha, opts.series_terms, y, 1.0)
        # next h term is pi k_n / n!, bounded above by the k_n estimate
        if est <= opts.quad_rel_tol * abs(val):
            return val
        # direct quadrature loses digits to cancellation here; the optimally
        # truncated series is exact to ~1e-17 beyond its threshold
        if y >= _series_threshold(alpha):
            return float(h_series_eval(y, alpha)[0])
    g = lambda s: math.exp(-s ** alpha)
    val, err = _quadrature.cosine_integral(g, y, opts.quad_rel_tol * 1e-2)
    if not np.isfinite(val) or err > opts.quad_rel_tol * abs(val):
        raise AccuracyError("oscillatory quadrature for h", err / abs(val) if val else np.inf)
    return val


# ---------------------------------------------------------------------------
# kernel quadrature on log-t panels

@functools.lru_cache(maxsize=8192)
def _h_panel(alpha, index):
    """Nodes, weights (in log t), h values and error bounds on one panel."""
    u0 = index * _PANEL_WIDTH
    u = u0 + 0.5 * _PANEL_WIDTH * (_GL_NODES + 1.0)
    w = 0.5 * _PANEL_WIDTH * _GL_WEIGHTS
    t = np.exp(u)
    h = np.empty_like(t)
    err = np.zeros_like(t)
    ts = _series_threshold(alpha)
    big = t > ts
    if big.any():
        h[big] = h_series_eval(t[big], alpha)
    for i in np.nonzero(~big)[0]:
        if t[i] <= 1.0:
            h[i], err[i] = _h_ray(t[i], alpha, 1e-13)
        else:
            val, e = _rotated_integral(t[i], alpha, 1e-13)
            scale = t[i] ** (1 + alpha)
            h[i], err[i] = val / scale, e / scale
    for arr in (t, w, h, err):
        arr.setflags(write=False)
    return t, w, h, err


def _nodes(alpha, x_min, x_max):
    lo = math.floor((math.log(x_min) - math.log(_CUTOFF) / alpha) / _PANEL_WIDTH)
    t_hi = max(_T_MAX, 1e6 * x_max)
    hi = math.ceil(math.log(t_hi) / _PANEL_WIDTH)
    parts = [_h_panel(alpha, i) for i in range(lo, hi)]
    t, w, h, err = (np.concatenate(z) for z in zip(*parts))
    return t, w, h, err, math.exp(hi * _PANEL_WIDTH), math.exp(lo * _PANEL_WIDTH)


def _tail_moment(x, alpha, T, m, nmax=10):
    """``int_T^inf exp(-(x/t)^alpha) t^(-m alpha) h(t) dt`` from the h series."""
    x = np.asarray(x, dtype=float)
    n, c = _h_coefficients(alpha, nmax)
    w = (x / T) ** alpha
    out = np.zeros_like(x)
    for nn, cc in zip(n, c):
        q = nn + m       # int_T^inf e^{-(x/t)^a} t^{-q a - 1} dt
        if np.all(w < 0.2):
            # expand the exponential: sum_j (-w)^j / j! / (q + j)
            j = np.arange(0, 25)
            ser = ((-w[..., None]) ** j / special.factorial(j) / (q + j)).sum(-1)
            val = T ** (-q * alpha) / alpha * ser
        else:
            val = np.exp(-q * alpha * np.log(x) + special.gammaln(q)) * special.gammainc(q, w) / alpha
        out = out + cc * val
    return out


def _kernel_moments(x, alpha, orders):
    """Return ``{m: int_0^inf exp(-(x/t)^alpha) t^(-m alpha) h(t) dt}`` and error bounds."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t, w, h, err, T, _ = _nodes(alpha, x.min(), x.max())
    ratio = (x[:, None] / t[None, :]) ** alpha
    cut = np.where(ratio < _CUTOFF * 1.5, np.exp(-ratio), 0.0)
    out, errs = {}, {}
    for m in orders:
        weight = w * t ** (1 - m * alpha)
        out[m] = cut @ (weight * h) + _tail_moment(x, alpha, T, m)
        errs[m] = cut @ (weight * err)
    return out, errs


def _k_quadrature(x, alpha, rel_tol):
    x = np.abs(x)
    mom, errs = _kernel_moments(x, alpha, (1,))
    pref = alpha / math.pi * x ** (alpha - 1)
    val = pref * mom[1]
    rel = errs[1] / np.abs(mom[1])
    if np.any(rel > rel_tol):
        raise AccuracyError("kernel quadrature", float(rel.max()))
    return val


def k_eval(x, alpha, opts=None):
    """Resolvent kernel ``k(x) = F^-1[1/(1+|xi|^alpha)](x)``.

    Accepts scalars or arrays.  Quadrature of the subordination integral is
    used up to the crossover; beyond it the ``opts.series_terms``-term
    expansion is used where its truncation estimate meets
    ``opts.quad_rel_tol``.

    Raises
    ------
    SingularityError
        ``x = 0`` with ``alpha <= 1``, where ``k`` is unbounded.
    """
    opts = opts or EvalOptions()
    _check_alpha(alpha)
    xa = np.asarray(x, dtype=float)
    ax = np.abs(np.atleast_1d(xa))
    if np.any(ax == 0.0):
        if alpha <= 1.0:
            raise SingularityError("k is unbounded at the origin for alpha <= 1")
    out = np.empty_like(ax)
    use_series = np.zeros(ax.shape, dtype=bool)
    cross = opts.crossover(K_CROSSOVER)
    far = ax > cross
    if far.any():
        series = kernel_series(alpha, opts.series_terms)
        sv = k_series_eval(ax[far], series)
        est = _next_term_estimate(alpha, opts.series_terms, ax[far], 1.0)
        ok = est <= opts.quad_rel_tol * np.abs(sv)
        idx = np.nonzero(far)[0][ok]
        out[idx] = np.atleast_1d(sv)[ok]
        use_series[idx] = True
    rest = ~use_series
    if rest.any():
        xs = ax[rest]
        zero = xs == 0.0
        vals = np.empty_like(xs)
        if (~zero).any():
            vals[~zero] = _k_quadrature(xs[~zero], alpha, opts.quad_rel_tol)
        if zero.any():
            vals[zero] = _k_origin(alpha)
        out[rest] = vals
    return out.reshape(xa.shape) if xa.ndim else float(out[0])


def _k_origin(alpha):
    """k(0) for alpha > 1, as (1/pi) int_0^inf dxi / (1 + xi^alpha)."""
    # no closed form is used; quadrature of the symbol itself
    val, _ = _quadrature.quad(lambda s: 1.0 / (1.0 + s ** alpha), 0.0, 1.0, 1e-13)
    val2, _ = _quadrature.quad(lambda v: v ** (alpha - 2) / (1.0 + v ** alpha), 0.0, 1.0, 1e-13)
    return (val + val2) / math.pi


def k_prime_eval(x, alpha, opts=None):
    """Derivative of the kernel, available for ``1 < alpha < 2`` and ``x != 0``.

    Computed by differentiating the subordination integral under the integral
    sign.  For large ``|x|`` it behaves like
    ``-sign(x) sum (n alpha + 1) k_n / |x|^(n alpha + 2)``.
    """
    opts = opts or EvalOptions()
    _check_alpha(alpha)
    if alpha <= 1.0:
        raise UnsupportedRegimeError("k' is only provided for 1 < alpha < 2")
    xa = np.asarray(x, dtype=float)
    xv = np.atleast_1d(xa)
    if np.any(xv == 0.0):
        raise DomainError("k' is evaluated away from the origin")
    ax = np.abs(xv)
    out = np.empty_like(ax)
    use_series = np.zeros(ax.shape, dtype=bool)
    far = ax > opts.crossover(K_CROSSOVER)
    if far.any():
        series = kernel_series(alpha, opts.series_terms)
        sv = np.atleast_1d(k_series_prime_eval(ax[far], series))
        est = _next_term_estimate(alpha, opts.series_terms, ax[far], 2.0) * (opts.series_terms + 2)
        ok = est <= opts.quad_rel_tol * np.abs(sv)
        idx = np.nonzero(far)[0][ok]
        out[idx] = sv[ok]
        use_series[idx] = True
    rest = ~use_series
    if rest.any():
        xs = ax[rest]
        mom, errs = _kernel_moments(xs, alpha, (1, 2))
        a = alpha
        out[rest] = a / math.pi * ((a - 1) * xs ** (a - 2) * mom[1]
                                   - a * xs ** (2 * a - 2) * mom[2])
        rel = (errs[1] / mom[1]).max()
        if rel > opts.quad_rel_tol:
            raise AccuracyError("kernel derivative quadrature", float(rel))
    out = np.sign(xv) * out
    return out.reshape(xa.shape) if xa.ndim else float(out[0])


def k_fourier_eval(x, alpha, rel_tol=1e-10):
    """Independent kernel oracle: ``(1/pi) int_0^inf cos(x xi)/(1+xi^alpha) d xi``.

    The slowly decaying Fourier integral is cut at the zeros of the cosine and
    the partial sums are accelerated with the epsilon algorithm.
    """
    _check_alpha(alpha)
    x = abs(float(x))
    if x == 0.0:
        if alpha <= 1.0:
            raise SingularityError("k is unbounded at the origin for alpha <= 1")
        return _k_origin(alpha)
    val, err = _quadrature.cosine_integral(lambda s: 1.0 / (1.0 + s ** alpha), x, rel_tol * 1e-2)
    if err > rel_tol * abs(val):
        raise AccuracyError("Fourier quadrature for k", err / abs(val))
    return val / math.pi


# ---------------------------------------------------------------------------
# normalisation and coefficient checks

@functools.lru_cache(maxsize=64)
def kernel_integral(alpha, half_width=100.0, series_terms=8, x_inner=1e-3):
    """Integral of k over the real line, assembled from three pieces.

    * ``[0, x_inner]``: exact, by integrating the subordination formula in x,
      ``(1/pi) int_0^inf h(t) (1 - exp(-(x_inner/t)^alpha)) dt``;
    * ``[x_inner, half_width]``: composite Gauss-Legendre quadrature of k in
      ``log x``;
    * ``[half_width, inf)``: the ``series_terms``-term expansion integrated
      termwise.

    Returns ``(total, parts)`` with the half-line pieces doubled.
    """
    _check_alpha(alpha)
    # composite quadrature in log x
    lo, hi = math.log(x_inner), math.log(half_width)
    npanel = max(1, math.ceil((hi - lo) / _PANEL_WIDTH))
    edges = np.linspace(lo, hi, npanel + 1)
    u = ((edges[:-1, None] + edges[1:, None]) / 2
         + (edges[1:, None] - edges[:-1, None]) / 2 * _GL_NODES[None, :]).ravel()
    wu = ((edges[1:, None] - edges[:-1, None]) / 2 * _GL_WEIGHTS[None, :]).ravel()
    xs = np.exp(u)
    body = float(np.sum(wu * xs * k_eval(xs, alpha, EvalOptions(crossover_x=math.inf))))
    # inner piece: h integrated against 1 - exp(-(x_inner/t)^alpha)
    t, w, h, _, T, t_lo = _nodes(alpha, x_inner, half_width)
    ratio = (x_inner / t) ** alpha
    inner = float(np.sum(w * t * h * -np.expm1(-ratio)))
    inner += float(h_eval(0.0, alpha)) * t_lo          # h ~ h(0) below the first node
    n, c = _h_coefficients(alpha, 10)
    inner += float(np.sum(c * T ** (-n * alpha) / (n * alpha)))  # int_T^inf h dt
    inner -= float(_tail_moment(np.array([x_inner]), alpha, T, 0)[0])
    inner /= math.pi
    # far tail from the series
    coeffs = [kernel_coefficient(m, alpha) for m in range(1, series_terms + 1)]
    tail = sum(cm * half_width ** (-m * alpha) / (m * alpha) for m, cm in enumerate(coeffs, start=1))
    parts = {"inner": 2 * inner, "body": 2 * body, "tail": 2 * tail}
    return 2 * (inner + body + tail), parts


def fit_kernel_coefficients(alpha, n_terms=3, x_range=(50.0, 5000.0), n_points=100, n_extra=3):
    """Least-squares fit of ``k_1..k_n`` to quadrature values of k.

    Fits ``k(x) = sum_{m <= n_terms + n_extra} c_m x^-(m alpha + 1)`` on
    logarithmically spaced points (the extra terms absorb truncation) and
    returns ``(fitted, pattern)`` arrays of length ``n_terms``.  Used to check
    the closed-form pattern for ``n >= 3``.
    """
    xs = np.geomspace(*x_range, n_points)
    kv = k_eval(xs, alpha, EvalOptions(crossover_x=math.inf))
    m = np.arange(1, n_terms + n_extra + 1)
    basis = xs[:, None] ** (-(m[None, :] * alpha + 1))
    # scale columns and rows for conditioning
    scale = np.abs(basis).max(axis=0)
    wrow = 1.0 / kv
    sol, *_ = np.linalg.lstsq(basis / scale * wrow[:, None], kv * wrow, rcond=None)
    fitted = sol / scale
    pattern = np.array([kernel_coefficient(int(j), alpha) for j in m])
    return fitted[:n_terms], pattern[:n_terms]


# ---------------------------------------------------------------------------
# tabulation

def tabulate_kernel(alpha, xs, opts=None, series_terms=2):
    """Rows comparing quadrature and truncated-series values of k (and k').

    Returns a list of dicts with keys ``x, k_quadrature, k_series, abs_diff``
    and, for ``alpha > 1``, ``kprime_quadrature, kprime_series,
    kprime_abs_diff``.  Series columns are NaN where ``|x| <= 1``.
    """
    opts = opts or EvalOptions()
    xs = np.asarray(xs, dtype=float)
    quad_opts = EvalOptions(quad_rel_tol=opts.quad_rel_tol, crossover_x=math.inf,
                            series_terms=opts.series_terms)
    kq = np.atleast_1d(k_eval(xs, alpha, quad_opts))
    series = kernel_series(alpha, series_terms)
    valid = np.abs(xs) > 1.0
    ks = np.full_like(xs, np.nan)
    if valid.any():
        ks[valid] = k_series_eval(xs[valid], series)
    rows = []
    kp = kps = None
    if alpha > 1.0:
        kp = np.atleast_1d(k_prime_eval(xs, alpha, quad_opts))
        kps = np.full_like(xs, np.nan)
        if valid.any():
            kps[valid] = k_series_prime_eval(xs[valid], series)
    for i, x in enumerate(xs):
        row = {"x": x, "k_quadrature": kq[i], "k_series": ks[i], "abs_diff": abs(kq[i] - ks[i])}
        if kp is not None:
            row.update(kprime_quadrature=kp[i], kprime_series=kps[i],
                       kprime_abs_diff=abs(kp[i] - kps[i]))
        rows.append(row)
    return rows


def write_kernel_csv(rows, path_or_file):
    """Write tabulation rows as CSV with a header and 15 significant digits."""
    if not rows:
        raise DomainError("nothing to write")
    fields = list(rows[0])
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            writer.writerow([f"{row[k]:.15e}" for k in fields])
    finally:
        if own:
            fh.close()
