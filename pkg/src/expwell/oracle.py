"""Finite-difference reference spectrum for the exponential well.

-psi'' + V psi = E psi on [-L, L] with Dirichlet walls, three-point Laplacian,
eigenvalues by Sturm-sequence bisection on the symmetric tridiagonal matrix.
Deliberately unrelated to the Bessel machinery it is used to check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "FDGrid",
    "OracleResult",
    "OracleError",
    "GridTooSmallError",
    "sturm_count",
    "fd_spectrum",
    "fd_eigenvector",
]

EIG_TOL = 1e-12


class OracleError(Exception):
    pass


class GridTooSmallError(OracleError):
    pass


@dataclass(frozen=True)
class FDGrid:
    """Box [-L, L] with N interior points; N odd puts x = 0 on the grid."""

    coupling: float
    half_width: float = 40.0
    n_points: int = 16001

    def __post_init__(self):
        if self.n_points < 200:
            raise ValueError("n_points must be >= 200")
        if self.n_points % 2 == 0:
            raise ValueError("n_points must be odd so that x = 0 is a grid point")
        if self.half_width <= 0.0:
            raise ValueError("half_width must be positive")
        if self.coupling**2 * math.exp(-self.half_width) > 1e-10:
            raise ValueError(
                f"g^2 exp(-L) = {self.coupling**2 * math.exp(-self.half_width):.3e} > 1e-10; "
                "widen the box"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points + 1)

    @property
    def x(self) -> np.ndarray:
        h = self.spacing
        return -self.half_width + h * np.arange(1, self.n_points + 1)

    def refined(self) -> "FDGrid":
        """Same box at half the spacing."""
        return FDGrid(self.coupling, self.half_width, 2 * self.n_points + 1)

    def matrix(self) -> tuple[np.ndarray, float]:
        """Diagonal and (constant) off-diagonal of the discrete Hamiltonian."""
        h = self.spacing
        diag = 2.0 / h**2 - self.coupling**2 * np.exp(-np.abs(self.x))
        return diag, -1.0 / h**2


@dataclass(frozen=True)
class OracleResult:
    energies: list[float]
    grid: FDGrid
    richardson_error: list[float]
    coarse_energies: list[float]

    def to_dict(self) -> dict:
        return {
            "energies": self.energies,
            "richardson_error": self.richardson_error,
            "coarse_energies": self.coarse_energies,
            "half_width": self.grid.half_width,
            "n_points": self.grid.n_points,
            "spacing": self.grid.spacing,
        }


def sturm_count(diag, off: float, sigma: float) -> int:
    """Number of eigenvalues below sigma (negative pivots of T - sigma I)."""
    off2 = off * off
    tiny = 1e-300
    count = 0
    q = math.inf
    for d in diag:
        q = (d - sigma) - off2 / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


def _eigenvalues(diag: np.ndarray, off: float, n_want: int, lower: float) -> list[float]:
    """Lowest eigenvalues below zero, up to n_want of them."""
    d = diag.tolist()
    below_zero = sturm_count(d, off, 0.0)
    out = []
    lo_prev = lower
    for j in range(min(n_want, below_zero)):
        lo, hi = lo_prev, 0.0
        while hi - lo > EIG_TOL:
            mid = 0.5 * (lo + hi)
            if sturm_count(d, off, mid) > j:
                hi = mid
            else:
                lo = mid
        lam = 0.5 * (lo + hi)
        out.append(lam)
        lo_prev = lo
    return out


def _grid_spectrum(grid: FDGrid, n_want: int) -> list[float]:
    diag, off = grid.matrix()
    # Gershgorin: nothing below min(diag) - 2|off|
    lower = float(diag.min()) - 2.0 * abs(off) - 1.0
    return _eigenvalues(diag, off, n_want, lower)


def fd_spectrum(g: float, grid: FDGrid | None = None, n_max: int = 0, strict: bool = False) -> OracleResult:
    """Negative eigenvalues E_0..E_{n_max} at spacing h/2, Richardson error from h.

    With strict=True a missing or near-threshold n_max-th level raises
    GridTooSmallError; otherwise only the bound levels found are returned.
    """
    if grid is None:
        grid = FDGrid(g)
    if not math.isclose(grid.coupling, g):
        raise ValueError("grid was built for a different coupling")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    coarse = _grid_spectrum(grid, n_max + 1)
    fine_grid = grid.refined()
    fine = _grid_spectrum(fine_grid, n_max + 1)
    n = min(len(coarse), len(fine))
    errors = [abs(coarse[i] - fine[i]) / 3.0 for i in range(n)]
    energies = fine[:n]
    # drop levels indistinguishable from the threshold
    while energies and energies[-1] + errors[-1] >= 0.0:
        energies.pop()
        errors.pop()
    if strict and len(energies) < n_max + 1:
        raise GridTooSmallError(f"only {len(energies)} bound levels resolved, need {n_max + 1}")
    return OracleResult(energies, fine_grid, errors, coarse[: len(energies)])


def fd_eigenvector(g: float, grid: FDGrid | None = None, n: int = 0, max_iter: int = 50):
    """Eigenvector n on the grid by shifted inverse iteration.

    Returns (x, v) arrays, v scaled to max |v| = 1 and signed positive just
    right of the origin.
    """
    if grid is None:
        grid = FDGrid(g)
    diag, off = grid.matrix()
    lower = float(diag.min()) - 2.0 * abs(off) - 1.0
    levels = _eigenvalues(diag, off, n + 1, lower)
    if len(levels) <= n:
        raise OracleError(f"level {n} is not bound on this grid")
    lam = levels[n]
    shift = lam - 1e-9 * max(1.0, abs(lam))
    size = diag.size
    ab = np.empty((3, size))
    ab[0, :] = off
    ab[1, :] = diag - shift
    ab[2, :] = off
    rng = np.random.default_rng(0)
    v = rng.standard_normal(size)
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = solve_banded((1, 1), ab, v)
        w /= np.linalg.norm(w)
        if min(np.linalg.norm(w - v), np.linalg.norm(w + v)) < 1e-13:
            v = w
            break
        v = w
    else:
        raise OracleError(f"inverse iteration did not converge in {max_iter} steps")
    x = grid.x
    v = v / np.max(np.abs(v))
    centre = size // 2
    probe = centre + 1 + int(np.argmax(np.abs(v[centre + 1 :]) > 1e-3))
    if v[probe] < 0:
        v = -v
    return x, v
