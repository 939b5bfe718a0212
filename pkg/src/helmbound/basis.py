"""Trial family on the semicircle: evaluation, Laplacian, interface traces.

In polar coordinates (r, phi) with phi measured from the y-axis (positive
for x < 0), the family splits by parity in x:

    even:  phi_1 = r - a
           phi_mu = r sin(n alpha (r-a)) cos(m beta phi),   mu = 2, 3, ...
    odd:   phi_mu = r sin(n alpha (r-a)) sin(m beta phi),   mu = 1, 2, ...

All members vanish on the arc r = a.  The linear function is included in the
even family because every product member vanishes at r = 0 while even
eigenfunctions generally do not.

Index bijection (fixed for reproducibility): row-major in n then m, with the
linear function first for the even family:

    even:  mu = 1 -> linear;  mu = 1 + (n-1) m_max + m  ->  (n, m)
    odd:   mu = (n-1) m_max + m  ->  (n, m)

On the interface y = 0 one has r = |x| and phi = +-pi/2 (positive sign for
x < 0), so with the interface normal n = (0, -1):

    d(r)/dy = 0  and  d(phi)/dy = 1/x   on y = 0,

hence the normal-derivative trace is -(1/x) d(phi_mu)/d(phi), which reduces
to closed forms with the 1/x absorbed analytically (finite at x -> 0):

    even:  -m beta sin(m beta pi/2) sin(n alpha (|x|-a))
    odd:   -m beta cos(m beta pi/2) sign(x) sin(n alpha (|x|-a))

The odd form has a sign(x) jump (zero is returned at x = 0, the symmetric
limit); products of two such traces are even and kink-free off the origin,
which the split-panel interface rule integrates spectrally.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, OutsideSubdomain, SingularOrigin
from .geometry import INTERFACE_TOL, CompositeDomain, QuadratureRule1D, QuadratureRule2D, cartesian_to_polar

ORIGIN_GUARD = 1e-14


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class BasisSpec:
    """Trial-family parameters; size is n_max*m_max (+1 for even)."""

    parity: Parity
    alpha: float = 1.0
    beta: float = 1.0
    n_max: int = 15
    m_max: int = 15

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")
        if self.n_max < 1 or self.m_max < 1:
            raise ValueError("n_max and m_max must be >= 1")

    @property
    def size(self) -> int:
        base = self.n_max * self.m_max
        return base + 1 if self.parity is Parity.EVEN else base

    def mu_to_nm(self, mu: int):
        """Map index mu to (n, m); None for the even linear function."""
        if not 1 <= mu <= self.size:
            raise IndexOutOfRange(f"mu={mu} outside 1..{self.size}")
        if self.parity is Parity.EVEN:
            if mu == 1:
                return None
            mu -= 2
        else:
            mu -= 1
        return mu // self.m_max + 1, mu % self.m_max + 1


def _check_mu(spec: BasisSpec, mu: int):
    if not 1 <= mu <= spec.size:
        raise IndexOutOfRange(f"mu={mu} outside 1..{spec.size}")


def eval_basis(spec: BasisSpec, mu: int, domain: CompositeDomain, x, y):
    """phi_mu at (x, y) in the closed semicircle; scalars or arrays."""
    _check_mu(spec, mu)
    r, phi = cartesian_to_polar(domain, x, y)
    nm = spec.mu_to_nm(mu)
    if nm is None:
        return r - domain.a
    n, m = nm
    radial = np.asarray(r) * np.sin(n * spec.alpha * (np.asarray(r) - domain.a))
    if spec.parity is Parity.EVEN:
        return radial * np.cos(m * spec.beta * np.asarray(phi))
    return radial * np.sin(m * spec.beta * np.asarray(phi))


def eval_basis_laplacian(spec: BasisSpec, mu: int, domain: CompositeDomain, x, y):
    """Polar Laplacian d_rr + (1/r) d_r + (1/r^2) d_phiphi of phi_mu.

    For the radial part g(r) = r sin(w(r-a)) with w = n alpha:

        g'' + g'/r = 3 w cos(w(r-a)) - w^2 r sin(w(r-a)) + sin(w(r-a))/r,

    and the angular factor contributes -(m beta)^2 sin(w(r-a))/r.  The even
    linear function gives exactly 1/r.  Quadrature nodes exclude r = 0; an
    evaluation there is refused rather than regularized.
    """
    _check_mu(spec, mu)
    r, phi = cartesian_to_polar(domain, x, y)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < ORIGIN_GUARD):
        raise SingularOrigin("Laplacian evaluation at r = 0")
    nm = spec.mu_to_nm(mu)
    if nm is None:
        return 1.0 / r
    n, m = nm
    w = n * spec.alpha
    mb = m * spec.beta
    sr = np.sin(w * (r_arr - domain.a))
    cr = np.cos(w * (r_arr - domain.a))
    radial = 3.0 * w * cr - w * w * r_arr * sr + (1.0 - mb * mb) * sr / r_arr
    if spec.parity is Parity.EVEN:
        return radial * np.cos(mb * np.asarray(phi))
    return radial * np.sin(mb * np.asarray(phi))


def basis_trace(spec: BasisSpec, mu: int, domain: CompositeDomain, x):
    """phi_mu on the interface y = 0 (r = |x|, phi = +-pi/2)."""
    _check_mu(spec, mu)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > domain.a + INTERFACE_TOL):
        raise OutsideSubdomain("trace point beyond |x| = a")
    nm = spec.mu_to_nm(mu)
    absx = np.abs(x)
    if nm is None:
        return absx - domain.a
    n, m = nm
    radial = np.sin(n * spec.alpha * (absx - domain.a))
    if spec.parity is Parity.EVEN:
        return absx * radial * np.cos(m * spec.beta * np.pi / 2.0)
    return -x * radial * np.sin(m * spec.beta * np.pi / 2.0)


def basis_normal_derivative_trace(spec: BasisSpec, mu: int, domain: CompositeDomain, x):
    """-d(phi_mu)/dy on y = 0, with the x -> 0 limit taken analytically.

    The odd-family value at exactly x = 0 is the symmetric (average) limit 0.
    """
    _check_mu(spec, mu)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > domain.a + INTERFACE_TOL):
        raise OutsideSubdomain("trace point beyond |x| = a")
    nm = spec.mu_to_nm(mu)
    if nm is None:
        return np.zeros_like(x) if x.ndim else 0.0
    n, m = nm
    mb = m * spec.beta
    radial = np.sin(n * spec.alpha * (np.abs(x) - domain.a))
    if spec.parity is Parity.EVEN:
        return -mb * np.sin(mb * np.pi / 2.0) * radial
    return -mb * np.cos(mb * np.pi / 2.0) * np.sign(x) * radial


def basis_tables(
    spec: BasisSpec,
    domain: CompositeDomain,
    volume_rule: QuadratureRule2D,
    surface_rule: QuadratureRule1D,
):
    """Evaluate the whole family on quadrature nodes.

    Returns (V, L, T, D): values and Laplacians at the volume nodes, traces
    and normal-derivative traces at the surface nodes, each of shape
    (M, #nodes).  This is the hot path for assembly; everything is filled
    with vectorized closed forms rather than per-point calls.
    """
    r = volume_rule.r
    phi = volume_rule.phi
    xs = surface_rule.nodes
    M = spec.size
    V = np.empty((M, r.size))
    L = np.empty((M, r.size))
    T = np.empty((M, xs.size))
    D = np.empty((M, xs.size))
    absx = np.abs(xs)
    sgn = np.sign(xs)
    a = spec_a = domain.a

    row = 0
    if spec.parity is Parity.EVEN:
        V[0] = r - a
        L[0] = 1.0 / r
        T[0] = absx - a
        D[0] = 0.0
        row = 1
    for n in range(1, spec.n_max + 1):
        w = n * spec.alpha
        sr = np.sin(w * (r - a))
        cr = np.cos(w * (r - a))
        radial_lap = 3.0 * w * cr - w * w * r * sr
        sr_over_r = sr / r
        tr_rad = np.sin(w * (absx - spec_a))
        for m in range(1, spec.m_max + 1):
            mb = m * spec.beta
            if spec.parity is Parity.EVEN:
                ang = np.cos(mb * phi)
                T[row] = absx * tr_rad * np.cos(mb * np.pi / 2.0)
                D[row] = -mb * np.sin(mb * np.pi / 2.0) * tr_rad
            else:
                ang = np.sin(mb * phi)
                T[row] = -xs * tr_rad * np.sin(mb * np.pi / 2.0)
                D[row] = -mb * np.cos(mb * np.pi / 2.0) * sgn * tr_rad
            V[row] = r * sr * ang
            L[row] = (radial_lap + (1.0 - mb * mb) * sr_over_r) * ang
            row += 1
    return V, L, T, D
