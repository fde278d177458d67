"""Periodic-grid discretisation of ``|D|^alpha u + u - f(u)``.

Profiles live on ``[-L, L)`` with ``N`` equispaced nodes.  All operators are
Fourier multipliers applied with real FFTs at wavenumbers ``pi m / L``;
integrals of grid functions use the trapezoidal rule (spectrally accurate for
periodic integrands).
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DegenerateProfileError, DomainError
from .specfun import Nonlinearity, ProblemParams

__all__ = [
    "Grid", "Profile", "apply_riesz", "apply_resolvent", "apply_multiplier",
    "derivative", "nonlinearity", "residual", "functional_J", "integrate",
    "profile_to_csv", "profile_from_csv", "profile_to_json", "profile_from_json",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-half_length, half_length)``."""

    half_length: float
    n_points: int

    def __post_init__(self):
        if not self.half_length > 0:
            raise DomainError("half_length must be positive")
        n = int(self.n_points)
        if n < 16 or n & (n - 1):
            raise DomainError(f"n_points must be a power of two >= 16, got {self.n_points}")

    @property
    def spacing(self):
        return 2.0 * self.half_length / self.n_points

    @property
    def x(self):
        return -self.half_length + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self):
        """Non-negative wavenumbers matching ``numpy.fft.rfft`` ordering."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.n_points, d=self.spacing)

    @property
    def frequencies(self):
        """All wavenumbers ``pi m / L`` for ``m`` in ``[-N/2, N/2)``."""
        return 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(self.n_points, d=self.spacing))

    def to_dict(self):
        return {"L": float(self.half_length), "N": int(self.n_points)}


@dataclass(frozen=True, eq=False)
class Profile:
    """Real samples of a function on a :class:`Grid` (read-only)."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        if v.shape != (self.grid.n_points,):
            raise DataError(f"expected {self.grid.n_points} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DataError("profile contains non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x(self):
        return self.grid.x

    def with_values(self, values):
        return Profile(self.grid, values)

    @classmethod
    def from_function(cls, grid, func):
        return cls(grid, func(grid.x))

    def __len__(self):
        return self.grid.n_points


def apply_multiplier(u, symbol):
    """Apply the Fourier multiplier ``symbol(|xi|)`` to a profile."""
    g = u.grid
    uh = np.fft.rfft(u.values)
    out = np.fft.irfft(uh * symbol(g.wavenumbers), n=g.n_points)
    return Profile(g, out)


def apply_riesz(u, alpha):
    """``|D|^alpha u`` through the multiplier ``|xi|^alpha``."""
    _check_order(alpha)
    return apply_multiplier(u, lambda xi: xi ** alpha)


def apply_resolvent(u, alpha):
    """``(1 + |D|^alpha)^-1 u``, i.e. periodic convolution with the kernel k."""
    _check_order(alpha)
    return apply_multiplier(u, lambda xi: 1.0 / (1.0 + xi ** alpha))


def derivative(u, order=1):
    """Spectral derivative ``d^j u / dx^j``; the Nyquist mode is dropped for odd j."""
    g = u.grid
    xi = g.wavenumbers
    sym = (1j * xi) ** order
    if order % 2:
        sym[-1] = 0.0
    out = np.fft.irfft(np.fft.rfft(u.values) * sym, n=g.n_points)
    return Profile(g, out)


def _check_order(alpha):
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")


def _f(values, params):
    if params.kind is Nonlinearity.INTEGER_POWER:
        return values ** int(round(params.p))
    return np.sign(values) * np.abs(values) ** params.p


def nonlinearity(u, params):
    """Pointwise ``f(u)``: ``|u|^(p-1) u`` or ``u^p`` depending on ``params.kind``."""
    return Profile(u.grid, _f(u.values, params))


def integrate(values, grid):
    """Trapezoidal (periodic) integral of grid samples."""
    return float(np.sum(values) * grid.spacing)


def residual(u, params):
    """Pointwise residual ``|D|^alpha u + u - f(u)`` and its max-norm."""
    r = apply_riesz(u, params.alpha).values + u.values - _f(u.values, params)
    return Profile(u.grid, r), float(np.max(np.abs(r)))


def functional_J(u, params):
    """Gagliardo-Nirenberg quotient whose minimisers are the ground states.

    ``J(u) = (int ||D|^(alpha/2) u|^2)^((p+1)/(2 alpha))
    * (int u^2)^((p+1)(alpha-1)/(2 alpha) + 1) / int |u|^(p+1)``.
    The Dirichlet-type term is evaluated by Parseval.
    """
    g = u.grid
    a, p = params.alpha, params.p
    uh = np.fft.rfft(u.values)
    # Parseval for rfft: interior modes count twice
    wts = np.full(uh.shape, 2.0)
    wts[0] = 1.0
    if g.n_points % 2 == 0:
        wts[-1] = 1.0
    dirichlet = float(np.sum(wts * g.wavenumbers ** a * np.abs(uh) ** 2)) * g.spacing / g.n_points
    mass = integrate(u.values ** 2, g)
    denom = integrate(np.abs(u.values) ** (p + 1), g)
    if denom == 0.0:
        raise DegenerateProfileError("int |u|^(p+1) vanishes")
    e = (p + 1) / (2 * a)
    return dirichlet ** e * mass ** (e * (a - 1) + 1) / denom


# ---------------------------------------------------------------------------
# serialisation

def profile_to_csv(u, path_or_file=None):
    """Write ``x,value`` rows (15 significant digits); returns the text if no target."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value"])
    for xi, vi in zip(u.x, u.values):
        w.writerow([f"{xi:.15e}", f"{vi:.15e}"])
    text = buf.getvalue()
    if path_or_file is None:
        return text
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(text)
    return text


def profile_from_csv(source):
    """Inverse of :func:`profile_to_csv`; the grid is inferred from the x column."""
    if hasattr(source, "read"):
        text = source.read()
    elif "\n" in str(source):
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["x", "value"]:
        raise DataError("missing x,value header")
    data = np.array(rows[1:], dtype=float)
    x, v = data[:, 0], data[:, 1]
    L = -x[0]
    grid = Grid(L, len(x))
    if not np.allclose(x, grid.x, rtol=0, atol=1e-9 * L):
        raise DataError("x column is not a uniform periodic grid")
    return Profile(grid, v)


def profile_to_json(u, params):
    """JSON envelope ``{alpha, p, kind, L, N, values}``."""
    doc = dict(params.to_dict())
    doc.update(u.grid.to_dict())
    doc["values"] = [float(v) for v in u.values]
    return json.dumps(doc)


def profile_from_json(text):
    """Parse an envelope; returns ``(profile, params)``."""
    doc = json.loads(text) if isinstance(text, str) else text
    grid = Grid(float(doc["L"]), int(doc["N"]))
    alpha = float(doc["alpha"])
    params = ProblemParams(alpha, float(doc["p"]), doc["kind"], boundary=math.isclose(alpha, 2.0))
    return Profile(grid, np.asarray(doc["values"], dtype=float)), params
