"""Composite domain, coordinate conventions and quadrature rules.

The domain is a semicircle of radius ``a`` sitting on top of a rectangle of
width ``2a`` and depth ``b``::

    upper subdomain   x^2 + y^2 < a^2, y > 0        (semicircle)
    lower subdomain   -a < x < a, -b < y < 0        (rectangle)
    interface         y = 0, |x| < a

The interface normal points from the semicircle into the rectangle,
n = (0, -1), so the interface normal derivative of a field f is -df/dy.

Polar coordinates in the semicircle measure the angle phi from the y-axis,
positive for x < 0:  x = -r sin(phi),  y = r cos(phi),  phi in [-pi/2, pi/2].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidInterval, NonPositiveGeometry, OutsideSubdomain

# Absolute tolerance for interface / closure membership at unit scale.
INTERFACE_TOL = 1e-12


class Region(enum.Enum):
    SEMICIRCLE = "semicircle"
    RECTANGLE = "rectangle"
    INTERFACE = "interface"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class CompositeDomain:
    """Semicircle of radius ``a`` joined to a rectangle of depth ``b``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise NonPositiveGeometry(f"need a > 0 and b > 0, got a={self.a}, b={self.b}")

    @property
    def interface_length(self) -> float:
        return 2.0 * self.a


def make_domain(a: float, b: float) -> CompositeDomain:
    """Validate and build the composite domain."""
    return CompositeDomain(float(a), float(b))


@dataclass(frozen=True)
class QuadratureRule1D:
    """Nodes/weights on an interval; weights sum to the interval length."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class QuadratureRule2D:
    """Tensor rule over the semicircle in polar coordinates.

    ``weights`` contain the polar measure r dr dphi; ``points`` are the
    Cartesian node locations.  The polar node coordinates are kept alongside
    so integrands given in (r, phi) form avoid a back-conversion.
    """

    points: np.ndarray  # (K, 2) Cartesian
    weights: np.ndarray  # (K,)
    r: np.ndarray = field(repr=False)  # (K,)
    phi: np.ndarray = field(repr=False)  # (K,)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def gauss_legendre(order: int, lo: float, hi: float) -> QuadratureRule1D:
    """Gauss-Legendre rule with ``order`` nodes on (lo, hi).

    Exact for polynomials of degree <= 2*order - 1.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not lo < hi:
        raise InvalidInterval(f"need lo < hi, got ({lo}, {hi})")
    x, w = leggauss(order)
    half = 0.5 * (hi - lo)
    return QuadratureRule1D(
        nodes=half * x + 0.5 * (hi + lo),
        weights=half * w,
        interval=(lo, hi),
    )


def interface_rule(domain: CompositeDomain, n_s: int) -> QuadratureRule1D:
    """Composite Gauss-Legendre rule on the interface x in (-a, a).

    Two Gauss-Legendre panels of ``n_s`` nodes each, split at x = 0 (2*n_s
    nodes total).  Interface traces of the semicircle trial functions carry
    |x| factors with a kink at the origin; splitting there keeps the rule
    spectrally accurate for them, while plain polynomial integrands are
    integrated exactly panel by panel.
    """
    if n_s < 1:
        raise ValueError(f"n_s must be >= 1, got {n_s}")
    a = domain.a
    left = gauss_legendre(n_s, -a, 0.0)
    right = gauss_legendre(n_s, 0.0, a)
    return QuadratureRule1D(
        nodes=np.concatenate([left.nodes, right.nodes]),
        weights=np.concatenate([left.weights, right.weights]),
        interval=(-a, a),
    )


def semicircle_rule(domain: CompositeDomain, n_r: int, n_phi: int) -> QuadratureRule2D:
    """Tensor Gauss-Legendre rule over the semicircle in polar coordinates.

    r in (0, a) with n_r nodes, phi in (-pi/2, pi/2) with n_phi nodes; the
    weight includes the polar factor r.
    """
    if n_r < 1 or n_phi < 1:
        raise ValueError(f"need n_r, n_phi >= 1, got ({n_r}, {n_phi})")
    rad = gauss_legendre(n_r, 0.0, domain.a)
    ang = gauss_legendre(n_phi, -0.5 * np.pi, 0.5 * np.pi)
    R, PH = np.meshgrid(rad.nodes, ang.nodes, indexing="ij")
    W = np.outer(rad.weights * rad.nodes, ang.weights)
    r = R.ravel()
    phi = PH.ravel()
    x = -r * np.sin(phi)
    y = r * np.cos(phi)
    return QuadratureRule2D(
        points=np.column_stack([x, y]),
        weights=W.ravel(),
        r=r,
        phi=phi,
    )


def classify_point(domain: CompositeDomain, x: float, y: float) -> Region:
    """Classify a point against the composite-domain regions.

    The interface means |y| <= 1e-12 and |x| < a; subdomain membership is
    strict (boundary points fall outside).
    """
    a, b = domain.a, domain.b
    if abs(y) <= INTERFACE_TOL:
        return Region.INTERFACE if abs(x) < a - INTERFACE_TOL else Region.OUTSIDE
    if y > 0:
        return Region.SEMICIRCLE if x * x + y * y < a * a else Region.OUTSIDE
    if -b < y < 0 and abs(x) < a:
        return Region.RECTANGLE
    return Region.OUTSIDE


def cartesian_to_polar(domain, x, y):
    """Map a point in the closed semicircle to (r, phi).

    phi is the angle from the y-axis, positive for x < 0:
    x = -r sin(phi), y = r cos(phi).  Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.hypot(x, y)
    if np.any(r > domain.a * (1.0 + 1e-12) + INTERFACE_TOL) or np.any(y < -INTERFACE_TOL):
        raise OutsideSubdomain("point not in the closure of the semicircle")
    phi = np.arctan2(-x, y)
    if x.ndim == 0:
        return float(r), float(phi)
    return r, phi
