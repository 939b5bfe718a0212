"""Independent finite-difference reference for the membrane eigenproblem.

A 5-point Laplacian on a uniform grid with a stair-step Dirichlet mask.
Deliberately unrelated to the embedding pipeline: different discretization,
different eigensolver (sparse shift-invert Lanczos), no shared code paths.
Global eigenvalue accuracy is O(h^2) on polygonal parts and limited by the
masked arc locally; combining two spacings (h, h/2) with Richardson
extrapolation recovers ~1e-2 accuracy or better for the low modes, which is
what the cross-validation tolerances need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import GridTooCoarse, IterationStalled
from .geometry import CompositeDomain

MIN_POINTS_ACROSS = 10


@dataclass(frozen=True)
class Rectangle:
    """Plain rectangle (0, width) x (0, height) with Dirichlet walls."""

    width: float
    height: float


@dataclass(frozen=True)
class FdmProblem:
    """Interior grid of a shape: spacing, node coordinates, inside mask."""

    h: float
    xs: np.ndarray
    ys: np.ndarray
    mask: np.ndarray  # (nx, ny) bool

    @property
    def n_unknowns(self) -> int:
        return int(self.mask.sum())


def _bounding_box(shape):
    if isinstance(shape, Rectangle):
        return 0.0, shape.width, 0.0, shape.height
    if isinstance(shape, CompositeDomain):
        return -shape.a, shape.a, -shape.b, shape.a
    raise TypeError(f"unsupported shape {type(shape).__name__}")


def _inside(shape, X, Y):
    if isinstance(shape, Rectangle):
        return np.ones_like(X, dtype=bool)  # every interior grid node
    a, b = shape.a, shape.b
    semi = (Y > 0) & (X * X + Y * Y < a * a)
    rect = (np.abs(X) < a) & (Y <= 0) & (Y > -b)
    return semi | rect


def build_fdm_problem(shape, h: float) -> FdmProblem:
    """Interior-node grid for the shape; h must tile the bounding box."""
    x0, x1, y0, y1 = _bounding_box(shape)
    nx_span = (x1 - x0) / h
    ny_span = (y1 - y0) / h
    if abs(nx_span - round(nx_span)) > 1e-9 or abs(ny_span - round(ny_span)) > 1e-9:
        raise GridTooCoarse(f"h={h} does not tile the bounding box {x1-x0} x {y1-y0}")
    min_dim = min(shape.width, shape.height) if isinstance(shape, Rectangle) else min(shape.a, shape.b)
    if min_dim / h < MIN_POINTS_ACROSS:
        raise GridTooCoarse(f"fewer than {MIN_POINTS_ACROSS} points span the smallest dimension")
    nx = int(round(nx_span)) - 1
    ny = int(round(ny_span)) - 1
    xs = x0 + h * np.arange(1, nx + 1)
    ys = y0 + h * np.arange(1, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return FdmProblem(h=h, xs=xs, ys=ys, mask=_inside(shape, X, Y))


def _laplacian(problem: FdmProblem) -> sp.csr_matrix:
    """Positive 5-point operator -Lap_h with the Dirichlet mask built in."""
    mask = problem.mask
    nx, ny = mask.shape
    index = -np.ones((nx, ny), dtype=np.int64)
    ii, jj = np.nonzero(mask)
    index[ii, jj] = np.arange(ii.size)
    n = ii.size
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.full(n, 4.0)]
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = ii + di, jj + dj
        ok = (ni >= 0) & (ni < nx) & (nj >= 0) & (nj < ny)
        ok[ok] &= index[ni[ok], nj[ok]] >= 0
        rows.append(index[ii[ok], jj[ok]])
        cols.append(index[ni[ok], nj[ok]])
        vals.append(np.full(int(ok.sum()), -1.0))
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return A / problem.h**2


def fdm_eigen(shape, h: float, num_modes: int):
    """Smallest num_modes eigenpairs of -Lap_h; returns [(k, field), ...].

    Fields come back on the full interior grid (zeros outside the mask),
    ascending in k.  Deterministic: the Lanczos start vector is fixed.
    """
    problem = build_fdm_problem(shape, h)
    A = _laplacian(problem)
    v0 = np.ones(A.shape[0])
    try:
        lam, vecs = spla.eigsh(A, k=num_modes, sigma=0.0, which="LM", v0=v0)
    except spla.ArpackNoConvergence as exc:
        raise IterationStalled(f"eigensolve stalled: {exc}") from exc
    order = np.argsort(lam)
    out = []
    for j in order:
        field = np.zeros(problem.mask.shape)
        field[problem.mask] = vecs[:, j]
        # fix the overall sign for reproducibility
        peak = np.unravel_index(np.argmax(np.abs(field)), field.shape)
        if field[peak] < 0:
            field = -field
        out.append((float(np.sqrt(lam[j])), field))
    return problem, out


def field_parity(problem: FdmProblem, field: np.ndarray) -> str:
    """Classify a grid field as even/odd in x (the grid is x-symmetric)."""
    mirrored = field[::-1, :]
    scale = np.linalg.norm(field)
    if scale == 0:
        return "none"
    even_err = np.linalg.norm(field - mirrored) / scale
    odd_err = np.linalg.norm(field + mirrored) / scale
    if even_err < 0.1 and even_err < odd_err:
        return "even"
    if odd_err < 0.1:
        return "odd"
    return "none"


def richardson_eigen(shape, h: float, num_modes: int):
    """Eigenvalues from spacings (h, h/2) combined by Richardson.

    The scheme is O(h^2), so lam = (4 lam_{h/2} - lam_h) / 3.  Modes pair by
    index; the parity labels come from the fine-grid fields.  Returns a list
    of (k_extrapolated, parity) plus the raw (k_h, k_{h/2}) table.
    """
    _, coarse = fdm_eigen(shape, h, num_modes)
    problem_f, fine = fdm_eigen(shape, h / 2.0, num_modes)
    results = []
    raw = []
    for (k1, _), (k2, field2) in zip(coarse, fine):
        lam = (4.0 * k2 * k2 - k1 * k1) / 3.0
        results.append((float(np.sqrt(lam)), field_parity(problem_f, field2)))
        raw.append((k1, k2))
    return results, raw
