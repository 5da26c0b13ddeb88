"""Analytic shooting for bound states of V(x) = -g^2 exp(-|x|).

With y = 2g exp(-x/2) and E = -k^2 the half-line equation becomes Bessel's
equation of order 2k, so every solution on x >= 0 is

    psi(x) = d1 J_{-2k}(y) + d2 Y_{-2k}(y).

The coefficients are fixed at the origin (psi(0)=1, psi'(0)=0 for even states,
psi(0)=0, psi'(0)=1 for odd ones).  Writing Y through the connection formula,

    psi = A J_{-2k}(y) + B J_{2k}(y),   A = d1 - d2 cot(2 pi k),  B = d2 / sin(2 pi k),

and J_{-2k}(y) ~ exp(+kx) as x -> oo.  A is therefore the weight of the
growing tail; it vanishes exactly at the eigenvalues.  Eigenvalues are located
by bisection on the number of nodes of psi, which drops by one each time k
crosses an eigenvalue from below.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import INTEGER_SNAP, bessel_j, bessel_j_log, bessel_y, cospi, sinpi

__all__ = [
    "MAX_COUPLING",
    "K_FLOOR",
    "Parity",
    "MatchedSolution",
    "Bracket",
    "BoundState",
    "SolverError",
    "EnvelopeError",
    "DegenerateWronskianError",
    "NearIntegerOrderError",
    "NodeCountInconclusive",
    "NoSuchStateError",
    "BracketInitError",
    "check_coupling",
    "potential",
    "coefficients_even",
    "coefficients_odd",
    "matched_solution",
    "wavefunction",
    "sample_wavefunction",
    "default_x_max",
    "node_count",
    "tail_coefficient",
    "solve_state",
    "spectrum",
]

MAX_COUPLING = 20.0
K_FLOOR = 1e-6
# midpoints with 2k this close to an integer are moved by SNAP_SHIFT
SNAP_SHIFT = 2e-6
MIN_GRID = 1000


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of_level(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @property
    def sign(self) -> int:
        """Factor relating psi(-x) to psi(x)."""
        return 1 if self is Parity.EVEN else -1


class SolverError(Exception):
    pass


class EnvelopeError(SolverError, ValueError):
    """Coupling or energy parameter outside the supported range."""


class DegenerateWronskianError(SolverError):
    pass


class NearIntegerOrderError(SolverError):
    pass


class NodeCountInconclusive(SolverError):
    pass


class NoSuchStateError(SolverError):
    pass


class BracketInitError(SolverError):
    pass


@dataclass(frozen=True)
class MatchedSolution:
    k: float
    g: float
    parity: Parity
    d1: float
    d2: float

    @property
    def growing(self) -> float:
        """Weight A of J_{-2k}(y), the component growing like exp(kx)."""
        return self.d1 - self.d2 * cospi(2.0 * self.k) / sinpi(2.0 * self.k)

    @property
    def decaying(self) -> float:
        """Weight B of J_{2k}(y), the component decaying like exp(-kx)."""
        return self.d2 / sinpi(2.0 * self.k)


@dataclass(frozen=True)
class Bracket:
    k_lo: float
    k_hi: float

    def __post_init__(self):
        if not 0.0 < self.k_lo < self.k_hi:
            raise ValueError(f"invalid bracket ({self.k_lo}, {self.k_hi})")

    @property
    def width(self) -> float:
        return self.k_hi - self.k_lo

    @property
    def energies(self) -> tuple[float, float]:
        return (-self.k_hi**2, -self.k_lo**2)


@dataclass(frozen=True)
class BoundState:
    n: int
    parity: Parity
    g: float
    k: float
    bracket: Bracket
    nodes: int
    iterations: int
    certified: bool = field(default=True)

    @property
    def energy(self) -> float:
        return -self.k**2

    @property
    def energy_bracket(self) -> tuple[float, float]:
        return self.bracket.energies

    def to_dict(self) -> dict:
        lo, hi = self.energy_bracket
        return {
            "n": self.n,
            "parity": self.parity.value,
            "g": self.g,
            "k": self.k,
            "energy": self.energy,
            "k_bracket": [self.bracket.k_lo, self.bracket.k_hi],
            "energy_bracket": [lo, hi],
            "nodes": self.nodes,
            "iterations": self.iterations,
            "certified": self.certified,
        }


def check_coupling(g: float) -> float:
    g = float(g)
    if not math.isfinite(g) or g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    if g > MAX_COUPLING:
        raise EnvelopeError(f"coupling g = {g} outside the envelope g <= {MAX_COUPLING}")
    return g


def _check_k(k: float, g: float) -> float:
    k = float(k)
    if not 0.0 < k <= g * (1.0 + 1e-12):
        raise EnvelopeError(f"energy parameter k = {k} outside (0, g = {g}]")
    return k


def potential(x, g: float):
    return -(g**2) * np.exp(-np.abs(x))


def _origin_values(k: float, g: float):
    # Bessel data at y = 2g for orders -2k and 1-2k
    nu = -2.0 * k
    z = 2.0 * g
    j0, j1 = bessel_j(nu, z), bessel_j(nu + 1.0, z)
    y0, y1 = bessel_y(nu, z), bessel_y(nu + 1.0, z)
    w = j1 * y0 - y1 * j0
    if abs(w) < 1e-14:
        raise DegenerateWronskianError(
            f"Wronskian {w:.3e} at k={k}, g={g} (expected 1/(pi g) = {1 / (math.pi * g):.6e})"
        )
    return j0, j1, y0, y1, w


def coefficients_even(k: float, g: float) -> tuple[float, float]:
    """Coefficients (D1, D2) of the even solution with psi(0)=1, psi'(0)=0."""
    g = check_coupling(g)
    k = _check_k(k, g)
    j0, j1, y0, y1, w = _origin_values(k, g)
    d1 = -(y1 + k * y0 / g) / w
    d2 = (j1 + k * j0 / g) / w
    return d1, d2


def coefficients_odd(k: float, g: float) -> tuple[float, float]:
    """Coefficients (D1, D2) of the odd solution with psi(0)=0, psi'(0)=1.

    With psi'(0) = -g C'_{-2k}(2g) and C'_nu = -C_{nu+1} + (nu/z) C_nu the two
    conditions solve to D1 = Y_{-2k}(2g)/(g W), D2 = -J_{-2k}(2g)/(g W).
    """
    g = check_coupling(g)
    k = _check_k(k, g)
    j0, j1, y0, y1, w = _origin_values(k, g)
    return y0 / (g * w), -j0 / (g * w)


def matched_solution(k: float, g: float, parity: Parity) -> MatchedSolution:
    coeffs = coefficients_even if parity is Parity.EVEN else coefficients_odd
    d1, d2 = coeffs(k, g)
    return MatchedSolution(float(k), float(g), parity, d1, d2)


def _near_integer_order(k: float, tol: float = INTEGER_SNAP) -> bool:
    return abs(2.0 * k - round(2.0 * k)) < tol


def wavefunction(sol: MatchedSolution, x):
    """psi(x) for x >= 0; scalar or array.

    Away from integer 2k the growing/decaying split is used, evaluated through
    ln(y/2) = ln g - x/2 so that arbitrarily large x is fine.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0):
        raise ValueError("wavefunction is defined here for x >= 0; reflect by parity")
    k, g = sol.k, sol.g
    if _near_integer_order(k):
        y = 2.0 * g * np.exp(-0.5 * arr)
        out = sol.d1 * bessel_j(-2.0 * k, y) + sol.d2 * bessel_y(-2.0 * k, y)
    else:
        log_half_y = math.log(g) - 0.5 * arr
        out = sol.growing * bessel_j_log(-2.0 * k, log_half_y)
        out = out + sol.decaying * bessel_j_log(2.0 * k, log_half_y)
    return float(out[0]) if scalar else out


def sample_wavefunction(
    sol: MatchedSolution, x_max: float, n_points: int = 501, reflect: bool = False
) -> list[tuple[float, float]]:
    """Uniform (x, psi) samples on [0, x_max], or [-x_max, x_max] when reflected."""
    xs = np.linspace(0.0, x_max, n_points)
    ps = wavefunction(sol, xs)
    pairs = list(zip(xs.tolist(), ps.tolist()))
    if reflect:
        s = sol.parity.sign
        left = [(-x, s * p) for x, p in reversed(pairs[1:])]
        pairs = left + pairs
    return pairs


def default_x_max(k: float, g: float) -> float:
    # growing part at relative size 1e-8 must dominate before x_max,
    # and the potential must be negligible there
    return max(25.0, (2.0 / k) * math.log(1e8), math.log(g * g / (1e-6 * k * k)))


def _sign_changes(v: np.ndarray) -> np.ndarray:
    """Indices i such that v[i] and the next nonzero value differ in sign."""
    nz = np.flatnonzero(v)
    s = np.sign(v[nz])
    flips = np.flatnonzero(s[1:] != s[:-1])
    return nz[flips], nz[flips + 1]


def node_count(sol: MatchedSolution, x_max: float | None = None, n_grid: int = MIN_GRID) -> int:
    """Number of strict sign changes of psi on (0, x_max).

    The classically allowed region is scanned on n_grid points; every cell with
    a sign change is resampled twice at 16x finer spacing.  Past the turning
    point psi'' / psi > 0, so psi has at most one zero there and comparing the
    signs at the region ends is exact.
    """
    if n_grid < MIN_GRID:
        raise ValueError(f"n_grid must be >= {MIN_GRID}")
    k, g = sol.k, sol.g
    if x_max is None:
        x_max = default_x_max(k, g)
    x_turn = min(max(2.0 * math.log(g / k), 0.0) + 1.0, x_max)
    xs = np.linspace(0.0, x_turn, n_grid + 1)[1:]
    tail = np.geomspace(x_turn, x_max, 9)[1:] if x_max > x_turn else np.empty(0)
    grid = np.concatenate([xs, tail])
    vals = wavefunction(sol, grid)

    count = 0
    left, right = _sign_changes(vals)
    for i, j in zip(left, right):
        a, b = grid[i], grid[j]
        if a >= x_turn:
            count += 1
            continue
        sub = 1
        for _ in range(2):
            fine = np.linspace(a, b, 17)
            fv = wavefunction(sol, fine)
            li, ri = _sign_changes(fv)
            sub = len(li)
            if sub != 1:
                break
            a, b = fine[li[0]], fine[ri[0]]
        if sub != 1:
            raise NodeCountInconclusive(
                f"cell [{grid[i]:.6g}, {grid[j]:.6g}] holds {sub} sign changes at "
                f"k={k}, g={g}; increase n_grid"
            )
        count += 1
    return count


def tail_coefficient(k: float, g: float, parity: Parity) -> float:
    """Secular function A(k, g) = D1 - D2 cot(2 pi k); its sign is psi's sign at infinity."""
    s = sinpi(2.0 * k)
    if abs(s) < 1e-8:
        raise NearIntegerOrderError(f"sin(2 pi k) = {s:.3e} at k = {k}")
    return matched_solution(k, g, parity).growing


def _nodes(k: float, g: float, parity: Parity, n_grid: int) -> int:
    return node_count(matched_solution(k, g, parity), n_grid=n_grid)


def _snap_midpoint(lo: float, hi: float) -> float | None:
    mid = 0.5 * (lo + hi)
    if not _near_integer_order(mid):
        return mid
    # shift toward the wider half
    step = SNAP_SHIFT if hi - mid >= mid - lo else -SNAP_SHIFT
    mid = round(2.0 * mid) / 2.0 + step
    if not lo < mid < hi or _near_integer_order(mid):
        return None
    return mid


def _polish(k_lo: float, k_hi: float, g: float, parity: Parity) -> float | None:
    """Root of the tail coefficient inside (k_lo, k_hi) by Illinois false position."""
    try:
        a, b = k_lo, k_hi
        fa, fb = tail_coefficient(a, g, parity), tail_coefficient(b, g, parity)
    except NearIntegerOrderError:
        return None
    if fa == 0.0 or fb == 0.0 or (fa > 0) == (fb > 0):
        return None
    side = 0
    for _ in range(100):
        c = (a * fb - b * fa) / (fb - fa)
        if not a < c < b or b - a <= 4e-16 * b:
            break
        fc = tail_coefficient(c, g, parity)
        if fc == 0.0:
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
    c = (a * fb - b * fa) / (fb - fa)
    return c if k_lo < c < k_hi else None


def solve_state(g: float, n: int, tol_k: float = 1e-10, n_grid: int = MIN_GRID) -> BoundState:
    """Bracket the n-th bound state (n = 0 ground state) to width tol_k in k.

    A trial k with more than m half-line nodes (m = n // 2) lies below the
    eigenvalue and k is raised; otherwise k is lowered.
    """
    g = check_coupling(g)
    if n < 0:
        raise ValueError("quantum number n must be >= 0")
    if tol_k < 1e-12:
        raise ValueError("tol_k must be >= 1e-12")
    parity = Parity.of_level(n)
    m = n // 2

    lo = K_FLOOR
    hi = g
    if _near_integer_order(hi):
        hi = round(2.0 * hi) / 2.0 - SNAP_SHIFT
    if _nodes(lo, g, parity, n_grid) <= m:
        raise NoSuchStateError(f"no bound state n={n} at g={g}")
    if _nodes(hi, g, parity, n_grid) > m:
        raise BracketInitError(f"node count above {m} at k = {hi}; bracket cannot be formed")

    iterations = 0
    while hi - lo > tol_k:
        mid = _snap_midpoint(lo, hi)
        if mid is None:
            break
        iterations += 1
        if _nodes(mid, g, parity, n_grid) > m:
            lo = mid
        else:
            hi = mid
    bracket = Bracket(lo, hi)

    try:
        a_lo = tail_coefficient(lo, g, parity)
        a_hi = tail_coefficient(hi, g, parity)
        certified = (a_lo > 0) != (a_hi > 0)
    except NearIntegerOrderError:
        certified = False
    root = _polish(lo, hi, g, parity) if certified else None
    k = root if root is not None else 0.5 * (lo + hi)
    return BoundState(
        n=n,
        parity=parity,
        g=g,
        k=k,
        bracket=bracket,
        nodes=_nodes(hi, g, parity, n_grid),
        iterations=iterations,
        certified=certified,
    )


def spectrum(g: float, n_max: int, tol_k: float = 1e-10, n_grid: int = MIN_GRID) -> list[BoundState]:
    """All bound states with n <= n_max, ordered by energy."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    states = []
    for n in range(n_max + 1):
        try:
            states.append(solve_state(g, n, tol_k, n_grid))
        except NoSuchStateError:
            break
    return states
