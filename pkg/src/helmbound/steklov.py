"""Steklov spectrum of the rectangle and the induced interface operators.

For the rectangle -a < x < a, -b < y < 0 with zero walls on x = +-a, y = -b
and the spectral boundary condition on y = 0, the eigenpairs at a fixed real
parameter kappa are closed-form.  With lam_n = n^2 pi^2 / (4 a^2):

    oscillatory (kappa^2 >= lam_n), mu = sqrt(kappa^2 - lam_n):
        b_n = -mu cot(mu b)
        psi_n = A_n sin(n pi (x+a) / 2a) sin(mu (y+b)),  A_n = 1/(sqrt(a) sin(mu b))
    evanescent (kappa^2 < lam_n), s = sqrt(lam_n - kappa^2):
        b_n = -s coth(s b)
        psi_n = A_n sin(n pi (x+a) / 2a) sinh(s (y+b)),  A_n = 1/(sqrt(a) sinh(s b))

The interface traces psi_n(x, 0) = sin(n pi (x+a)/2a)/sqrt(a) are orthonormal
on (-a, a) and independent of kappa.  The Dirichlet-to-Neumann map scales the
n-th trace coefficient by b_n(kappa); the Neumann-to-Dirichlet map by 1/b_n.

Both b_n branches meet the regime switch kappa^2 = lam_n continuously with
value -1/b.  With t = (kappa^2 - lam_n) b^2, a single series covers both
sides; it is used for |t| < 1e-6 because the closed-form derivative loses
~10 digits to cancellation there (two ~1/u terms differing by O(u)).

Surface functions are plain arrays: either samples at the nodes of an
interface quadrature rule, or coefficients over the first N Steklov traces.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NearDirichletResonance, NearNeumannResonance, OutsideSubdomain
from .geometry import INTERFACE_TOL, CompositeDomain, QuadratureRule1D

# |sin(mu b)| below this is treated as a Dirichlet resonance (pole of b_n).
DIRICHLET_POLE_GUARD = 1e-8
# |b_n| below this is treated as a Neumann resonance (pole of 1/b_n).
NEUMANN_POLE_GUARD = 1e-12
# Regime-switch series band in t = (kappa^2 - lam_n) b^2.
SWITCH_BAND = 1e-6


class Regime(enum.Enum):
    OSCILLATORY = "oscillatory"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class SteklovMode:
    """One rectangle Steklov eigenpair at fixed kappa."""

    n: int
    lambda_n: float
    regime: Regime
    b_n: float
    db_n_dkappa: float
    a_n: float


def steklov_lambda(n, domain: CompositeDomain):
    """Transverse threshold lam_n = n^2 pi^2 / (4 a^2)."""
    n = np.asarray(n, dtype=float)
    return n * n * np.pi**2 / (4.0 * domain.a**2)


def _sinh_ratio_term(u):
    """u / sinh(u)^2, stable for large u (no overflow)."""
    # u/sinh(u)^2 = 4 u exp(-2u) / (1 - exp(-2u))^2
    return 4.0 * u * np.exp(-2.0 * u) / np.expm1(-2.0 * u) ** 2


def steklov_table(kappa: float, n_modes: int, domain: CompositeDomain):
    """Vectorized (b_n, db_n/dkappa) for n = 1..n_modes.

    Raises NearDirichletResonance if any retained oscillatory mode sits on a
    pole of b_n.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    b = domain.b
    n = np.arange(1, n_modes + 1)
    lam = steklov_lambda(n, domain)
    t = (kappa**2 - lam) * b * b

    bn = np.empty(n_modes)
    dbn = np.empty(n_modes)

    band = np.abs(t) < SWITCH_BAND
    ts = t[band]
    bn[band] = (-1.0 + ts / 3.0 + ts**2 / 45.0 + 2.0 * ts**3 / 945.0) / b
    dbn[band] = 2.0 * kappa * b * (1.0 / 3.0 + 2.0 * ts / 45.0 + 2.0 * ts**2 / 315.0)

    osc = ~band & (t >= 0)
    if np.any(osc):
        mu = np.sqrt(kappa**2 - lam[osc])
        u = mu * b
        sin_u = np.sin(u)
        bad = np.abs(sin_u) < DIRICHLET_POLE_GUARD
        if np.any(bad):
            n_bad = int(n[osc][bad][0])
            raise NearDirichletResonance(n_bad, kappa)
        cot_u = np.cos(u) / sin_u
        bn[osc] = -mu * cot_u
        dbn[osc] = (kappa / mu) * (-cot_u + u / sin_u**2)

    ev = ~band & (t < 0)
    if np.any(ev):
        s = np.sqrt(lam[ev] - kappa**2)
        u = s * b
        coth_u = 1.0 / np.tanh(u)
        bn[ev] = -s * coth_u
        dbn[ev] = (-kappa / s) * (-coth_u + _sinh_ratio_term(u))

    return bn, dbn


def steklov_eigenvalue(kappa: float, n: int, domain: CompositeDomain) -> float:
    """b_n(kappa); continuous across the regime switch with value -1/b."""
    bn, _ = _single(kappa, n, domain)
    return bn


def steklov_eigenvalue_derivative(kappa: float, n: int, domain: CompositeDomain) -> float:
    """Analytic db_n/dkappa; >= 0 for kappa > 0 on both branches."""
    _, dbn = _single(kappa, n, domain)
    return dbn


def _single(kappa, n, domain):
    if n < 1:
        raise ValueError(f"mode index must be >= 1, got {n}")
    lam = float(steklov_lambda(n, domain))
    b = domain.b
    t = (kappa**2 - lam) * b * b
    if abs(t) < SWITCH_BAND:
        bn = (-1.0 + t / 3.0 + t * t / 45.0 + 2.0 * t**3 / 945.0) / b
        dbn = 2.0 * kappa * b * (1.0 / 3.0 + 2.0 * t / 45.0 + 2.0 * t * t / 315.0)
        return bn, dbn
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    if t >= 0:
        mu = np.sqrt(kappa**2 - lam)
        u = mu * b
        if abs(np.sin(u)) < DIRICHLET_POLE_GUARD:
            raise NearDirichletResonance(n, kappa)
        cot_u = np.cos(u) / np.sin(u)
        return -mu * cot_u, (kappa / mu) * (-cot_u + u / np.sin(u) ** 2)
    s = np.sqrt(lam - kappa**2)
    u = s * b
    coth_u = 1.0 / np.tanh(u)
    return -s * coth_u, (-kappa / s) * (-coth_u + float(_sinh_ratio_term(u)))


def steklov_mode(kappa: float, n: int, domain: CompositeDomain) -> SteklovMode:
    """Assemble the full eigenpair record for one mode."""
    lam = float(steklov_lambda(n, domain))
    bn, dbn = _single(kappa, n, domain)
    b = domain.b
    t = (kappa**2 - lam) * b * b
    if t >= 0:
        regime = Regime.OSCILLATORY
        u = np.sqrt(t)
        denom = np.sin(u) if abs(t) >= SWITCH_BAND else u
        if abs(t) >= SWITCH_BAND and abs(denom) < DIRICHLET_POLE_GUARD:
            raise NearDirichletResonance(n, kappa)
    else:
        regime = Regime.EVANESCENT
        denom = np.sinh(np.sqrt(-t))
    # A_n diverges at the exact regime switch even though the mode field
    # stays finite there; the field routines use the stable ratio forms.
    a_n = 1.0 / (np.sqrt(domain.a) * denom) if denom != 0 else np.inf
    return SteklovMode(n=n, lambda_n=lam, regime=regime, b_n=bn, db_n_dkappa=dbn, a_n=float(a_n))


def steklov_trace(n, domain: CompositeDomain, x):
    """Interface trace psi_n(x, 0) = sin(n pi (x+a)/2a) / sqrt(a).

    Independent of kappa for this geometry; orthonormal on (-a, a).
    ``n`` may be an int or an array of mode indices (broadcast against x).
    """
    x = np.asarray(x, dtype=float)
    n = np.asarray(n, dtype=float)
    a = domain.a
    return np.sin(n * np.pi * (x + a) / (2.0 * a)) / np.sqrt(a)


def steklov_mode_field(kappa: float, n: int, domain: CompositeDomain, x, y):
    """psi_n(kappa, x, y) inside the closed rectangle.

    Evaluated as trace(x) * g(y) with g the y-profile normalized to g(0) = 1;
    the evanescent profile uses exp/expm1 so large s b cannot overflow.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = domain.a, domain.b
    if (
        np.any(np.abs(x) > a + INTERFACE_TOL)
        or np.any(y > INTERFACE_TOL)
        or np.any(y < -b - INTERFACE_TOL)
    ):
        raise OutsideSubdomain("point not in the closure of the rectangle")
    xpart = steklov_trace(n, domain, x)
    return xpart * _mode_profile(kappa, n, domain, y)


def _mode_profile(kappa: float, n: int, domain: CompositeDomain, y):
    """y-profile g_n(y) with g_n(0) = 1 and g_n(-b) = 0."""
    b = domain.b
    y = np.asarray(y, dtype=float)
    lam = float(steklov_lambda(n, domain))
    t = (kappa**2 - lam) * b * b
    if abs(t) < SWITCH_BAND:
        yb = y + b
        return (yb / b) * (1.0 - t * (yb * yb - b * b) / (6.0 * b * b))
    if t >= 0:
        mu = np.sqrt(kappa**2 - lam)
        if abs(np.sin(mu * b)) < DIRICHLET_POLE_GUARD:
            raise NearDirichletResonance(n, kappa)
        return np.sin(mu * (y + b)) / np.sin(mu * b)
    s = np.sqrt(lam - kappa**2)
    return np.exp(s * y) * np.expm1(-2.0 * s * (y + b)) / np.expm1(-2.0 * s * b)


def rectangle_volume_norm(kappa: float, n: int, domain: CompositeDomain) -> float:
    """Volume norm <psi_n|psi_n> over the rectangle, via the derivative identity.

    Green's theorem applied to the kappa-differentiated Helmholtz pair gives
    <psi_n|psi_n> = (1/2 kappa) db_n/dkappa exactly for a unit-trace mode.
    """
    _, dbn = _single(kappa, n, domain)
    return dbn / (2.0 * kappa)


def project_surface(
    f_samples: np.ndarray,
    kappa: float,
    n_modes: int,
    domain: CompositeDomain,
    rule: QuadratureRule1D,
) -> np.ndarray:
    """Coefficients c_n = (psi_n | f), n = 1..n_modes, by interface quadrature.

    ``f_samples`` are the values of f at ``rule.nodes``.  kappa is accepted
    for signature uniformity; the traces do not depend on it here.
    """
    del kappa
    n = np.arange(1, n_modes + 1)
    traces = steklov_trace(n[:, None], domain, rule.nodes[None, :])
    return traces @ (rule.weights * np.asarray(f_samples, dtype=float))


def apply_dtn(c: np.ndarray, kappa: float, domain: CompositeDomain) -> np.ndarray:
    """Dirichlet-to-Neumann action: scale c_n by b_n(kappa)."""
    c = np.asarray(c, dtype=float)
    bn, _ = steklov_table(kappa, c.size, domain)
    return bn * c


def apply_ntd(c: np.ndarray, kappa: float, domain: CompositeDomain) -> np.ndarray:
    """Neumann-to-Dirichlet action: scale c_n by 1/b_n(kappa)."""
    c = np.asarray(c, dtype=float)
    bn, _ = steklov_table(kappa, c.size, domain)
    _guard_neumann(bn, kappa)
    return c / bn


def apply_dtn_derivative(c: np.ndarray, kappa: float, domain: CompositeDomain) -> np.ndarray:
    """Scale c_n by db_n/dkappa (>= 0)."""
    c = np.asarray(c, dtype=float)
    _, dbn = steklov_table(kappa, c.size, domain)
    return dbn * c


def apply_ntd_derivative(c: np.ndarray, kappa: float, domain: CompositeDomain) -> np.ndarray:
    """Scale c_n by d(1/b_n)/dkappa = -db_n/dkappa / b_n^2 (<= 0)."""
    c = np.asarray(c, dtype=float)
    bn, dbn = steklov_table(kappa, c.size, domain)
    _guard_neumann(bn, kappa)
    return -dbn / bn**2 * c


def _guard_neumann(bn: np.ndarray, kappa: float):
    small = np.abs(bn) < NEUMANN_POLE_GUARD
    if np.any(small):
        raise NearNeumannResonance(int(np.nonzero(small)[0][0] + 1), kappa)
