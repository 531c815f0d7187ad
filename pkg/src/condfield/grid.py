"""Midpoint discretization of a bounded interval and the norms built on it.

All field vectors in the package are plain numpy arrays of point values on a
``Grid``.  The inner product is the midpoint-rule quadrature

    <psi|phi> = w * sum_i conj(psi_i) * phi_i,   w = (b - a) / M,

conjugate-linear in the first argument.  Every other module goes through
``inner`` / ``l2_norm`` / ``sup_norm`` so the weight bookkeeping lives here
and nowhere else.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyVector, LengthMismatch, NonpositiveLength, TooFewPoints


@dataclass(frozen=True)
class Grid:
    """Uniform midpoint grid on the interval [a, b] with M points."""

    a: float
    b: float
    m: int
    points: np.ndarray = field(repr=False)
    w: float

    @property
    def length(self) -> float:
        return self.b - self.a


def make_grid(a: float, b: float, m: int) -> Grid:
    """Build the midpoint grid x_i = a + (i + 1/2) h, h = (b - a) / M."""
    if not b > a:
        raise NonpositiveLength(f"need b > a, got a={a}, b={b}")
    if m < 2:
        raise TooFewPoints(f"need at least 2 grid points, got {m}")
    h = (b - a) / m
    points = a + (np.arange(m) + 0.5) * h
    points.setflags(write=False)
    return Grid(a=float(a), b=float(b), m=int(m), points=points, w=h)


def _check(phi: np.ndarray, grid: Grid) -> np.ndarray:
    phi = np.asarray(phi)
    if phi.shape != (grid.m,):
        raise LengthMismatch(f"vector of shape {phi.shape} on grid with M={grid.m}")
    return phi


def inner(psi, phi, grid: Grid):
    """Quadrature inner product, conjugate-linear in the first argument."""
    psi = _check(psi, grid)
    phi = _check(phi, grid)
    return grid.w * np.vdot(psi, phi)


def l2_norm(phi, grid: Grid) -> float:
    """Weighted L2 norm, sqrt(<phi|phi>)."""
    val = inner(phi, phi, grid)
    return float(np.sqrt(val.real if np.iscomplexobj(val) else val))


def sup_norm(phi) -> float:
    """max_i |phi_i| (modulus for complex entries)."""
    phi = np.asarray(phi)
    if phi.size == 0:
        raise EmptyVector("sup_norm of an empty vector")
    return float(np.max(np.abs(phi)))
