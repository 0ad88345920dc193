"""Finite-difference cross-check on a truncated strip.

Independent verification path for the mode-matching solver: discretize
-Laplace on [-L, L] x [0, d] with the 5-point stencil, the Robin walls
-d_y psi + alpha(x) psi = 0 (y = 0) and d_y psi + alpha(x) psi = 0
(y = d) eliminated through symmetric ghost points, and a Dirichlet or
Neumann closure at x = +-L.  The wall rows carry half trapezoid weights,
so the natural operator is generalized-symmetric with the diagonal mass
diag(1/2, 1, ..., 1, 1/2) per column of y values; a similarity transform
by the square root of that mass returns an ordinary symmetric matrix with
the same spectrum.  Everything is second order, so two grids and a
Richardson step give an eigenvalue estimate with a defensible error bar
-- which is the whole point: the oracle's values are compared against
mode matching without sharing any of its machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConfigError, ContractError, NumericalError
from .modematch import WellConfig, neumann_state_cap
from .transverse import transversal_eigenvalues

_CLOSURES = ("dirichlet", "neumann")


@dataclass(frozen=True)
class FdGrid:
    """Tensor grid on [-L, L] x [0, d]: nx interior x columns (the closure
    rows at x = +-L are eliminated), ny y rows including both walls."""

    L: float
    nx: int
    ny: int
    hx: float
    hy: float
    closure: str = "dirichlet"

    def __post_init__(self):
        if self.closure not in _CLOSURES:
            raise ConfigError(f"closure must be one of {_CLOSURES}, got {self.closure!r}")
        for name in ("L", "hx", "hy"):
            v = getattr(self, name)
            if not (v > 0.0) or not np.isfinite(v):
                raise ConfigError(f"{name} must be positive and finite, got {v!r}")
        if self.nx < 16 or self.ny < 16:
            raise ConfigError(f"grid too coarse: nx={self.nx}, ny={self.ny} (need >= 16)")
        if abs(self.hx - 2.0 * self.L / (self.nx + 1)) > 1e-9 * self.hx:
            raise ConfigError("hx inconsistent with L and nx (expect hx = 2L/(nx+1))")


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Symmetric positive-semidefinite sparse matrix with 5-point sparsity."""

    dimension: int
    matrix: sp.csr_matrix


def make_grid(config: WellConfig, L: float, h: float, closure: str = "dirichlet") -> FdGrid:
    """Build a grid with target spacing h, snapped so the coupling jump at
    |x| = a falls exactly on a grid line (hx = a/ceil(a/h)) and the
    half-length on a multiple of hx."""
    if not (h > 0.0) or not np.isfinite(h):
        raise ConfigError(f"h must be positive and finite, got {h!r}")
    m = int(np.ceil(config.a / h))
    hx = config.a / m
    half = int(round(L / hx))
    if half <= m:
        raise ConfigError("truncation half-length must exceed the well half-width")
    ny1 = int(round(config.d / h))
    return FdGrid(L=half * hx, nx=2 * half - 1, ny=ny1 + 1,
                  hx=hx, hy=config.d / ny1, closure=closure)


def _cross_section_block(alpha: float, ny: int, hy: float) -> sp.dia_matrix:
    """1D transversal operator with ghost-eliminated Robin walls: rows
    (1 + alpha hy, 2, ..., 2, 1 + alpha hy)/hy^2, off-diagonals -1/hy^2."""
    diag = np.full(ny, 2.0)
    diag[0] = 1.0 + alpha * hy
    diag[-1] = 1.0 + alpha * hy
    off = -np.ones(ny - 1)
    return sp.diags([off, diag, off], [-1, 0, 1]) / hy**2


def assemble(config: WellConfig, grid: FdGrid) -> SparseOperator:
    """Assemble the symmetric FD operator for the coupling profile
    alpha(x) = alpha1 on |x| < a, alpha0 outside (a node exactly on the
    jump gets alpha0)."""
    if abs(grid.hy * (grid.ny - 1) - config.d) > 1e-9 * config.d:
        raise ConfigError("grid hy/ny inconsistent with the strip width d")
    nx, ny, hx, hy = grid.nx, grid.ny, grid.hx, grid.hy
    half = (nx + 1) // 2
    x = -grid.L + hx * np.arange(1, nx + 1)
    m_f = config.a / hx
    if abs(m_f - round(m_f)) < 1e-9:
        # aligned grid: classify by exact integer offset from the center
        offs = np.arange(1, nx + 1) - half
        alpha_x = np.where(np.abs(offs) < round(m_f), config.alpha1, config.alpha0)
    else:
        alpha_x = np.where(np.abs(x) < config.a, config.alpha1, config.alpha0)

    ex = np.ones(nx)
    Tx = sp.diags([-ex[:-1], 2.0 * ex, -ex[:-1]], [-1, 0, 1]) / hx**2
    if grid.closure == "neumann":
        # mirror fold: end rows become (psi_1 - psi_2)/hx^2, exact for
        # x-constant modes and still positive semidefinite
        Tx = Tx.tolil()
        Tx[0, 0] = 1.0 / hx**2
        Tx[-1, -1] = 1.0 / hx**2
        Tx = Tx.tocsr()

    wall_w = np.ones(ny)
    wall_w[0] = 0.5
    wall_w[-1] = 0.5
    A = sp.kron(Tx, sp.diags(wall_w), format="csr")
    A = A + sp.block_diag([_cross_section_block(al, ny, hy) for al in alpha_x],
                          format="csr")
    scale = sp.diags(np.kron(np.ones(nx), 1.0 / np.sqrt(wall_w)))
    A = (scale @ A @ scale).tocsr()
    A = ((A + A.T) * 0.5).tocsr()
    return SparseOperator(dimension=nx * ny, matrix=A)


def lowest_eigenpairs(op: SparseOperator, count: int, shift: float,
                      tol: float = 1e-8) -> list[tuple[float, np.ndarray]]:
    """The count smallest eigenpairs by shift-invert Lanczos, eigenvalues
    ascending, vectors orthonormal with the largest entry positive.

    shift must sit below the spectrum (the matrices here are positive
    semidefinite, so any shift <= 0 or below the known lower bound works);
    each pair is verified to satisfy ||A v - lambda v|| <= tol ||A||_inf.
    """
    if count < 1:
        raise ContractError("count must be >= 1")
    if count > op.dimension - 2:
        raise ContractError("count too large for the operator dimension")
    try:
        vals, vecs = eigsh(op.matrix, k=count, sigma=shift, which="LM",
                           v0=np.ones(op.dimension))
    except ArpackNoConvergence as exc:
        raise NumericalError(f"sparse eigensolver did not converge: {exc}") from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    norm_a = float(np.max(np.abs(op.matrix).sum(axis=1)))
    pairs = []
    for j in range(count):
        v = vecs[:, j]
        resid = float(np.linalg.norm(op.matrix @ v - vals[j] * v))
        if resid > tol * norm_a:
            raise NumericalError(
                f"eigenpair {j} residual {resid:.3e} exceeds {tol:g} * ||A|| = "
                f"{tol * norm_a:.3e}"
            )
        if v[np.argmax(np.abs(v))] < 0.0:
            v = -v
        pairs.append((float(vals[j]), v))
    return pairs


def oracle_bound_states(config: WellConfig, L: float, refinements: int,
                        h0: float | None = None, closure: str = "dirichlet") -> list[float]:
    """Richardson-extrapolated FD eigenvalues confidently below the
    continuum threshold E_1(alpha0).

    Solves on grids h0, h0/2, ..., h0/2^(refinements-1) (h0 defaults to
    d/64), extrapolates each tracked eigenvalue from the two finest grids
    by the order-2 rule lambda + (lambda_f - lambda_c)/3, and keeps values
    below E_1(alpha0) - margin with margin = 3 (discretization estimate +
    exp(-k_1 L) domain-truncation bound).  An empty list is a valid
    result: it means no state is resolvable at this resolution, not an
    error."""
    if not L >= 4.0 * max(config.a, config.d):
        raise ContractError("need L >= 4 max(a, d) for a meaningful truncation")
    if refinements < 2:
        raise ContractError("refinements must be >= 2")
    if h0 is None:
        h0 = config.d / 64.0
    E1_in = float(transversal_eigenvalues(config.inner, 1)[0])
    E1_out = float(transversal_eigenvalues(config.outer, 1)[0])
    k = max(2, neumann_state_cap(config) + 2)
    per_grid = []
    for j in range(refinements):
        grid = make_grid(config, L, h0 / 2**j, closure=closure)
        op = assemble(config, grid)
        pairs = lowest_eigenpairs(op, min(k, op.dimension - 2), shift=0.5 * E1_in)
        per_grid.append(np.array([lam for lam, _ in pairs]))
    coarse, fine = per_grid[-2], per_grid[-1]
    out = []
    for lc, lf in zip(coarse, fine):
        lam = lf + (lf - lc) / 3.0
        err_est = abs(lf - lc) / 3.0
        k1 = np.sqrt(max(E1_out - lam, 0.0))
        margin = 3.0 * (err_est + np.exp(-k1 * L))
        if lam < E1_out - margin:
            out.append(float(lam))
    return sorted(out)
