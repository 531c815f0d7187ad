"""Linear functionals as coefficient vectors, and the theory constants.

A functional is stored as a real coefficient vector T with
<T|phi> = inner(T, phi) = w * sum_i T_i phi_i.  Point evaluation puts 1/w at
the grid index nearest x0 (exact at grid level); derivative evaluation uses a
central finite-difference stencil scaled by 1/(w h^n).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import covariance as cv
from .errors import (
    ConfigError,
    DegenerateFunctional,
    GridMismatch,
    OutOfDomain,
    StencilOutOfRange,
    UnsupportedOrder,
)
from .grid import Grid, inner, l2_norm

SUPPORTED_ORDERS = (2, 4, 6)


@dataclass(frozen=True)
class LinearFunctional:
    grid: Grid
    coeff: np.ndarray = field(repr=False)
    kind: str = "custom"
    x0: float | None = None  # snapped evaluation point, when applicable
    n: int = 0
    order: int | None = None
    snap_distance: float = 0.0

    def __call__(self, phi):
        """<T|phi> under the grid inner product."""
        return inner(self.coeff, phi, self.grid)


def _nearest_index(grid: Grid, x0: float) -> int:
    if x0 < grid.a or x0 > grid.b:
        raise OutOfDomain(f"x0={x0} outside [{grid.a}, {grid.b}]")
    # argmin returns the first minimizer, so exact midpoints snap downward
    return int(np.argmin(np.abs(grid.points - x0)))


def make_point_functional(grid: Grid, x0: float) -> LinearFunctional:
    """Dirac mass at the grid point nearest x0: <T|phi> = phi_{i0} exactly."""
    i0 = _nearest_index(grid, x0)
    coeff = np.zeros(grid.m)
    coeff[i0] = 1.0 / grid.w
    coeff.setflags(write=False)
    return LinearFunctional(
        grid=grid,
        coeff=coeff,
        kind="point",
        x0=float(grid.points[i0]),
        n=0,
        snap_distance=float(abs(grid.points[i0] - x0)),
    )


def stencil_coefficients(n: int, order: int):
    """Central finite-difference coefficients for the n-th derivative.

    Returns (offsets, coeffs) with sum_j coeffs[j] f(x + offsets[j] h)
    = h^n f^(n)(x) + O(h^(n+order)).
    """
    if order not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(f"order must be one of {SUPPORTED_ORDERS}, got {order}")
    if n < 0:
        raise UnsupportedOrder(f"derivative order n must be >= 0, got {n}")
    if n == 0:
        return np.array([0]), np.array([1.0])
    p = (n + 1) // 2 - 1 + order // 2
    offsets = np.arange(-p, p + 1)
    vander = np.vander(offsets.astype(float), increasing=True).T  # row k: offsets^k
    rhs = np.zeros(2 * p + 1)
    rhs[n] = math.factorial(n)
    coeffs = np.linalg.solve(vander, rhs)
    return offsets, coeffs


def make_derivative_functional(
    grid: Grid, x0: float, n: int, order: int = 2
) -> LinearFunctional:
    """Stencil approximation of phi -> phi^(n)(x0), accuracy O(h^order)."""
    if n == 0:
        return make_point_functional(grid, x0)
    offsets, coeffs = stencil_coefficients(n, order)
    i0 = _nearest_index(grid, x0)
    if i0 + offsets[0] < 0 or i0 + offsets[-1] >= grid.m:
        raise StencilOutOfRange(
            f"stencil {offsets[0]}..{offsets[-1]} around index {i0} "
            f"does not fit in a grid of {grid.m} points"
        )
    coeff = np.zeros(grid.m)
    coeff[i0 + offsets] = coeffs / (grid.w * grid.w ** n)
    coeff.setflags(write=False)
    return LinearFunctional(
        grid=grid,
        coeff=coeff,
        kind="derivative",
        x0=float(grid.points[i0]),
        n=int(n),
        order=int(order),
        snap_distance=float(abs(grid.points[i0] - x0)),
    )


_NAMED_WEIGHTS = {
    "uniform": lambda x, a, b: np.full_like(x, 1.0 / (b - a)),
    "cosine": lambda x, a, b: np.cos(np.pi * (x - a) / (b - a)),
}


def make_integral_functional(grid: Grid, weight) -> LinearFunctional:
    """<T|phi> = w * sum_i weight_i phi_i, a quadrature of integral(weight * phi).

    `weight` is either a named profile ("uniform", "cosine") or an array of
    samples on the grid.
    """
    if isinstance(weight, str):
        try:
            values = _NAMED_WEIGHTS[weight](grid.points, grid.a, grid.b)
        except KeyError:
            raise ConfigError(f"unknown integral weight {weight!r}") from None
    else:
        values = np.asarray(weight, dtype=float)
        if values.shape != (grid.m,):
            raise GridMismatch(f"weight of shape {values.shape} on grid M={grid.m}")
    if not np.any(values):
        raise DegenerateFunctional("integral weight is identically zero")
    values = values.copy()
    values.setflags(write=False)
    return LinearFunctional(grid=grid, coeff=values, kind="integral")


def make_custom_functional(grid: Grid, coeff) -> LinearFunctional:
    coeff = np.asarray(coeff, dtype=float)
    if coeff.shape != (grid.m,):
        raise GridMismatch(f"coefficients of shape {coeff.shape} on grid M={grid.m}")
    if not np.any(coeff):
        raise DegenerateFunctional("custom functional is identically zero")
    coeff = coeff.copy()
    coeff.setflags(write=False)
    return LinearFunctional(grid=grid, coeff=coeff, kind="custom")


def _check_grids(t: LinearFunctional, cov: cv.CovOperator):
    if t.grid is not cov.grid and (
        t.grid.m != cov.grid.m or t.grid.a != cov.grid.a or t.grid.b != cov.grid.b
    ):
        raise GridMismatch("functional and operator built on different grids")


def tct(t: LinearFunctional, cov: cv.CovOperator) -> float:
    """<T|C|T>, the variance of <T|phi> over unconditional samples."""
    _check_grids(t, cov)
    val = float(inner(t.coeff, cov.apply(t.coeff), t.grid).real)
    a2 = cv.point_variance_max(cov)
    tnorm2 = l2_norm(t.coeff, t.grid) ** 2
    if val <= 1e-14 * a2 * tnorm2:
        raise DegenerateFunctional(f"<T|C|T> = {val:.3e} is numerically zero")
    return val


def tc2t(t: LinearFunctional, cov: cv.CovOperator) -> float:
    """<T|C^2|T> = ||C T||_2^2."""
    _check_grids(t, cov)
    return l2_norm(cov.apply(t.coeff), t.grid) ** 2


def profile(t: LinearFunctional, cov: cv.CovOperator) -> np.ndarray:
    """The limit profile direction C|T> (phase factor applied downstream)."""
    _check_grids(t, cov)
    return cov.apply(t.coeff)


@dataclass(frozen=True)
class TheoryConstants:
    """Scalars driving the concentration bounds."""

    tct: float  # <T|C|T>
    tc2t: float  # <T|C^2|T>
    a_const: float  # sqrt of max pointwise variance
    b_const: float  # sqrt(tct / tc2t)
    d_const: float  # a_const * b_const * sqrt(b - a)

    def threshold(self, u: float) -> float:
        """The conditioning event on t_1: |t_1| >= u / sqrt(<T|C|T>)."""
        return u / np.sqrt(self.tct)


def constants(t: LinearFunctional, cov: cv.CovOperator) -> TheoryConstants:
    tct_val = tct(t, cov)
    tc2t_val = tc2t(t, cov)
    if tc2t_val <= 0.0:
        raise DegenerateFunctional("<T|C^2|T> is zero")
    a_const = float(np.sqrt(cv.point_variance_max(cov)))
    b_const = float(np.sqrt(tct_val / tc2t_val))
    d_const = a_const * b_const * float(np.sqrt(t.grid.length))
    return TheoryConstants(
        tct=tct_val, tc2t=tc2t_val, a_const=a_const, b_const=b_const, d_const=d_const
    )


def analytic_derivative_curve(kernel, x, x0: float, n: int):
    """Closed-form d^n C(x, x0) / d x0^n where available, else None.

    For the squared-exponential kernel the n-th derivative is
    variance * ell^(-n) * He_n(s) * exp(-s^2/2) with s = (x - x0)/ell
    (probabilists' Hermite polynomial).
    """
    x = np.asarray(x, dtype=float)
    if isinstance(kernel, cv.SquaredExponential):
        s = (x - x0) / kernel.ell
        he = np.polynomial.hermite_e.HermiteE.basis(n)(s)
        return kernel.variance * kernel.ell ** (-n) * he * np.exp(-(s ** 2) / 2.0)
    if n == 0 and hasattr(kernel, "pair"):
        try:
            return np.asarray(kernel.pair(x, x0))
        except TypeError:  # RankK.pair needs the domain endpoints
            return None
    return None


def functional_from_spec(text: str, grid: Grid) -> LinearFunctional:
    """Parse CLI functional strings: point:<x0>, dpoint:<x0>:<n>[:<order>],
    integral:<weight-name>, custom:@<csv-file>."""
    parts = text.split(":")
    try:
        if parts[0] == "point" and len(parts) == 2:
            return make_point_functional(grid, float(parts[1]))
        if parts[0] == "dpoint" and len(parts) in (3, 4):
            order = int(parts[3]) if len(parts) == 4 else 2
            return make_derivative_functional(grid, float(parts[1]), int(parts[2]), order)
        if parts[0] == "integral" and len(parts) == 2:
            return make_integral_functional(grid, parts[1])
        if parts[0] == "custom" and len(parts) == 2 and parts[1].startswith("@"):
            values = np.loadtxt(parts[1][1:], delimiter=",", ndmin=1)
            return make_custom_functional(grid, values)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad functional spec {text!r}: {exc}") from exc
    except (OutOfDomain, StencilOutOfRange, UnsupportedOrder, GridMismatch,
            DegenerateFunctional) as exc:
        raise ConfigError(f"bad functional spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown functional spec {text!r}")
