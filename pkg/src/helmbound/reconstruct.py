"""Full-domain eigenfunction reconstruction, sampling and export.

A converged solve yields coefficients gamma1 over the semicircle family; the
rectangle part is expanded over the Steklov modes with coefficients fixed by
the method's matching rule:

    DtN:  c_n = (psi_n | trace of Psi_I)            (value matching)
    NtD:  c_n = (psi_n | grad_perp Psi_I) / b_n     (derivative matching)

|Psi|^2 is sampled on a tensor grid covering the bounding box, zeroed
outside the domain, and normalized so the volume-weighted cell sum is 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import assembly as _assembly
from .basis import BasisSpec
from .errors import IoFailure
from .geometry import CompositeDomain, QuadratureRule1D, interface_rule
from .steklov import _guard_neumann, _mode_profile, steklov_table, steklov_trace


@dataclass(frozen=True)
class ModeEstimate:
    """One converged mode: k estimate and both coefficient vectors.

    ``kappa`` is the operator parameter the final matrices were assembled
    at; it agrees with ``k_estimate`` within the iteration tolerance.
    """

    k_estimate: float
    method: "_assembly.Method"
    gamma1: np.ndarray
    gamma2: np.ndarray
    spec: BasisSpec
    kappa: float

    @property
    def parity(self):
        return self.spec.parity


@dataclass(frozen=True)
class GridSpec:
    nx: int = 401
    ny: int = 701


@dataclass(frozen=True)
class FieldGrid:
    """|Psi|^2 samples on a tensor grid; values[i, j] sits at (xs[i], ys[j])."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray

    @property
    def nx(self) -> int:
        return self.xs.size

    @property
    def ny(self) -> int:
        return self.ys.size


def gamma2_coefficients(
    method: "_assembly.Method",
    gamma1: np.ndarray,
    kappa: float,
    spec: BasisSpec,
    domain: CompositeDomain,
    n_modes: int,
    rule: QuadratureRule1D | None = None,
    n_s: int = 128,
) -> np.ndarray:
    """Rectangle-side Steklov coefficients for a given semicircle solution."""
    from .basis import basis_normal_derivative_trace, basis_trace

    if rule is None:
        rule = interface_rule(domain, n_s)
    gamma1 = np.asarray(gamma1, dtype=float)
    xs = rule.nodes
    M = spec.size
    if method is _assembly.Method.DTN:
        surface = np.zeros_like(xs)
        for mu in range(1, M + 1):
            surface += gamma1[mu - 1] * basis_trace(spec, mu, domain, xs)
    else:
        surface = np.zeros_like(xs)
        for mu in range(1, M + 1):
            surface += gamma1[mu - 1] * basis_normal_derivative_trace(spec, mu, domain, xs)
    n = np.arange(1, n_modes + 1)
    psi = steklov_trace(n[:, None], domain, xs[None, :])
    coeffs = psi @ (rule.weights * surface)
    if method is _assembly.Method.NTD:
        bn, _ = steklov_table(kappa, n_modes, domain)
        _guard_neumann(bn, kappa)
        coeffs = coeffs / bn
    return coeffs


def _semicircle_values(spec: BasisSpec, domain: CompositeDomain, gamma1, x, y):
    """Sum of the family at scattered semicircle points (vectorized in mu)."""
    r = np.hypot(x, y)
    phi = np.arctan2(-x, y)
    out = np.zeros_like(r)
    idx = 0
    from .basis import Parity

    if spec.parity is Parity.EVEN:
        out += gamma1[0] * (r - domain.a)
        idx = 1
    for n in range(1, spec.n_max + 1):
        radial = r * np.sin(n * spec.alpha * (r - domain.a))
        for m in range(1, spec.m_max + 1):
            if spec.parity is Parity.EVEN:
                out += gamma1[idx] * radial * np.cos(m * spec.beta * phi)
            else:
                out += gamma1[idx] * radial * np.sin(m * spec.beta * phi)
            idx += 1
    return out


def sample_field(
    estimate: ModeEstimate,
    kappa: float,
    domain: CompositeDomain,
    grid: GridSpec = GridSpec(),
) -> FieldGrid:
    """Sample normalized |Psi|^2 on a grid covering [-a, a] x [-b, a].

    Semicircle cells take |sum gamma1 phi|^2, rectangle cells
    |sum c_n psi_n(kappa)|^2, interface cells the semicircle-side trace,
    outside cells 0.  The rectangle block is evaluated mode-by-mode as an
    outer product of the closed x/y factors.
    """
    a, b = domain.a, domain.b
    xs = np.linspace(-a, a, grid.nx)
    ys = np.linspace(-b, a, grid.ny)
    values = np.zeros((grid.nx, grid.ny))

    X, Y = np.meshgrid(xs, ys, indexing="ij")
    semi = (Y > 0) & (X * X + Y * Y < a * a)
    if np.any(semi):
        field = _semicircle_values(estimate.spec, domain, estimate.gamma1, X[semi], Y[semi])
        values[semi] = field**2

    rect_rows = ys < 0
    inter_rows = np.abs(ys) <= 1e-12
    y_rect = ys[rect_rows]
    in_x = np.abs(xs) < a
    if np.any(rect_rows):
        n_modes = estimate.gamma2.size
        block = np.zeros((in_x.sum(), y_rect.size))
        xr = xs[in_x]
        for n in range(1, n_modes + 1):
            cn = estimate.gamma2[n - 1]
            if cn == 0.0:
                continue
            block += cn * np.outer(
                steklov_trace(n, domain, xr), _mode_profile(kappa, n, domain, y_rect)
            )
        values[np.ix_(in_x, rect_rows)] = block**2
    if np.any(inter_rows):
        trace = _semicircle_values(
            estimate.spec, domain, estimate.gamma1, xs[in_x], np.zeros(in_x.sum())
        )
        for j in np.nonzero(inter_rows)[0]:
            values[in_x, j] = trace**2

    dx = xs[1] - xs[0] if grid.nx > 1 else 2 * a
    dy = ys[1] - ys[0] if grid.ny > 1 else a + b
    total = values.sum() * dx * dy
    if total > 0:
        values = values / total
    return FieldGrid(xs=xs, ys=ys, values=values)


def export_grid(grid: FieldGrid, fmt: str, path) -> None:
    """Write the grid as CSV ("x,y,value", 9 significant digits) or plain PGM.

    PGM output is P2 with maxval 65535; values scale linearly so the grid
    maximum maps to 65535 (an all-zero grid stays all-zero).
    """
    fmt = fmt.lower()
    if fmt not in ("csv", "pgm"):
        raise ValueError(f"unsupported format {fmt!r}")
    try:
        if fmt == "csv":
            with open(path, "w", newline="\n") as fh:
                fh.write("x,y,value\n")
                for i, x in enumerate(grid.xs):
                    for j, y in enumerate(grid.ys):
                        fh.write(f"{x:.9g},{y:.9g},{grid.values[i, j]:.9g}\n")
        else:
            vmax = float(grid.values.max())
            scale = 65535.0 / vmax if vmax > 0 else 0.0
            raster = np.rint(grid.values * scale).astype(np.int64)
            with open(path, "w", newline="\n") as fh:
                fh.write("P2\n")
                fh.write(f"{grid.nx} {grid.ny}\n")
                fh.write("65535\n")
                # rows top to bottom: j descending in y, i ascending in x
                for j in range(grid.ny - 1, -1, -1):
                    fh.write(" ".join(str(int(v)) for v in raster[:, j]) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_grid_csv(path) -> FieldGrid:
    """Parse a CSV produced by export_grid back into a FieldGrid."""
    try:
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    values = data[:, 2].reshape(xs.size, ys.size)
    return FieldGrid(xs=xs, ys=ys, values=values)


def interface_mismatch(
    estimate: ModeEstimate,
    domain: CompositeDomain,
    n_s: int = 128,
) -> tuple[float, float]:
    """L2 norms of the value and normal-derivative jumps across the interface.

    DtN solutions have (by construction) only the Steklov-truncation tail in
    the value jump; NtD solutions the analogue in the derivative jump.
    """
    from .basis import basis_normal_derivative_trace, basis_trace

    rule = interface_rule(domain, n_s)
    xs = rule.nodes
    spec = estimate.spec
    v1 = np.zeros_like(xs)
    d1 = np.zeros_like(xs)
    for mu in range(1, spec.size + 1):
        v1 += estimate.gamma1[mu - 1] * basis_trace(spec, mu, domain, xs)
        d1 += estimate.gamma1[mu - 1] * basis_normal_derivative_trace(spec, mu, domain, xs)
    n_modes = estimate.gamma2.size
    n = np.arange(1, n_modes + 1)
    psi = steklov_trace(n[:, None], domain, xs[None, :])
    bn, _ = steklov_table(estimate.kappa, n_modes, domain)
    v2 = estimate.gamma2 @ psi
    d2 = (bn * estimate.gamma2) @ psi
    norm = np.sqrt(float(np.dot(rule.weights, v1 * v1))) or 1.0
    value_jump = np.sqrt(float(np.dot(rule.weights, (v1 - v2) ** 2)))
    deriv_jump = np.sqrt(float(np.dot(rule.weights, (d1 - d2) ** 2)))
    return value_jump / norm, deriv_jump / norm
