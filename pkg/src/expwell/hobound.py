"""Harmonic-oscillator majorants of the exponential well and their upper bounds.

The parabola w^2 x^2 - M touching -g^2 exp(-|x|) at x = +-xi lies above the
well everywhere, so its levels (2n+1) w - M bound the true levels from above.
Tangency fixes

    w(xi) = g / sqrt(2 xi e^xi),     M(xi) = g^2 e^-xi (1 + xi/2),

and the bound is minimised over xi.  Stationary points lie on the curve
g = (2n+1) sqrt(e^xi / (2 xi^3)), whose minimum sits at xi = 3; the part
xi < 3 carries the minima, the part xi > 3 the maxima.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CRITICAL_XI",
    "Branch",
    "HOEstimate",
    "OptimalCurvePoint",
    "OptimumResult",
    "omega_of_xi",
    "shift_of_xi",
    "ho_upper_bound",
    "majorant",
    "lambert_w",
    "xi_from_omega",
    "bound_derivative",
    "optimal_xi",
    "coupling_of_optimal_xi",
    "optimal_curve_point",
    "curve_minimum",
    "classify_branch",
]

CRITICAL_XI = 3.0
_BRANCH_TOL = 1e-12
_XI_MIN = 1e-4
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Branch(enum.Enum):
    USEFUL = "useful"
    CRITICAL = "critical"
    USELESS = "useless"


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not xi > 0.0:
        raise ValueError(f"osculation point xi must be > 0, got {xi}")
    return xi


def _check_g(g: float) -> float:
    g = float(g)
    if not g > 0.0:
        raise ValueError(f"coupling g must be > 0, got {g}")
    return g


def omega_of_xi(g: float, xi: float) -> float:
    xi = _check_xi(xi)
    return _check_g(g) / math.sqrt(2.0 * xi * math.exp(xi))


def shift_of_xi(g: float, xi: float) -> float:
    xi = _check_xi(xi)
    return _check_g(g) ** 2 * math.exp(-xi) * (1.0 + 0.5 * xi)


@dataclass(frozen=True)
class HOEstimate:
    g: float
    xi: float
    omega: float
    shift: float
    n: int
    bound: float

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "xi": self.xi,
            "omega": self.omega,
            "shift": self.shift,
            "n": self.n,
            "bound": self.bound,
        }


def ho_upper_bound(g: float, xi: float, n: int = 0) -> HOEstimate:
    """Level-n energy of the oscillator osculating the well at +-xi."""
    if n < 0:
        raise ValueError("n must be >= 0")
    omega = omega_of_xi(g, xi)
    shift = shift_of_xi(g, xi)
    return HOEstimate(float(g), float(xi), omega, shift, n, (2 * n + 1) * omega - shift)


def majorant(x, omega: float, shift: float):
    return omega**2 * np.asarray(x, dtype=float) ** 2 - shift


def lambert_w(y: float) -> float:
    """Principal branch W(y) for y > 0: the root of w e^w = y, bracketed Newton."""
    y = float(y)
    if not y > 0.0:
        raise ValueError("lambert_w: y must be > 0")
    lo, hi = 0.0, max(1.0, math.log(y) + 1.0)
    w = math.log1p(y) if y < math.e else math.log(y) - math.log(math.log(y))
    w = min(max(w, lo), hi)
    for _ in range(100):
        f = w * math.exp(w) - y
        if f > 0:
            hi = w
        else:
            lo = w
        step = f / (math.exp(w) * (w + 1.0))
        nxt = w - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - w) <= 1e-15 * max(abs(nxt), 1e-300):
            return nxt
        w = nxt
    return w


def xi_from_omega(g: float, omega: float) -> float:
    """Osculation point of the parabola with spring constant omega."""
    g = _check_g(g)
    if not omega > 0.0:
        raise ValueError("omega must be > 0")
    return lambert_w(g * g / (2.0 * omega * omega))


def bound_derivative(g: float, xi: float, n: int = 0) -> float:
    """Analytic d/dxi of the level-n bound.

    (1 + xi)/2 * e^-xi * [g^2 - (2n+1) g e^{xi/2} / sqrt(2 xi^3)]
    """
    xi = _check_xi(xi)
    g = _check_g(g)
    c = (2 * n + 1) * g * math.exp(0.5 * xi) / math.sqrt(2.0 * xi**3)
    return 0.5 * (1.0 + xi) * math.exp(-xi) * (g * g - c)


def coupling_of_optimal_xi(xi0: float, n: int = 0) -> float:
    """Coupling whose level-n bound is stationary at xi0."""
    xi0 = _check_xi(xi0)
    return (2 * n + 1) * math.sqrt(math.exp(xi0) / (2.0 * xi0**3))


def classify_branch(xi0: float) -> Branch:
    xi0 = _check_xi(xi0)
    if xi0 < CRITICAL_XI - _BRANCH_TOL:
        return Branch.USEFUL
    if xi0 > CRITICAL_XI + _BRANCH_TOL:
        return Branch.USELESS
    return Branch.CRITICAL


@dataclass(frozen=True)
class OptimalCurvePoint:
    xi0: float
    g: float
    branch: Branch


def optimal_curve_point(xi0: float, n: int = 0) -> OptimalCurvePoint:
    return OptimalCurvePoint(float(xi0), coupling_of_optimal_xi(xi0, n), classify_branch(xi0))


def _golden_min(f, a: float, b: float, tol: float = 1e-8) -> float:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def curve_minimum(lo: float = 0.1, hi: float = 10.0) -> float:
    """Location of the minimum of coupling_of_optimal_xi on [lo, hi], found numerically."""
    return _golden_min(coupling_of_optimal_xi, _check_xi(lo), float(hi))


@dataclass(frozen=True)
class OptimumResult:
    xi0: float
    estimate: HOEstimate
    interior: bool
    branch: Branch

    def to_dict(self) -> dict:
        out = self.estimate.to_dict()
        out.update(xi0=self.xi0, interior=self.interior, branch=self.branch.value)
        return out


def optimal_xi(g: float, n: int = 0) -> OptimumResult:
    """Minimise the level-n bound over xi in (1e-4, 3].

    Golden-section search brackets the minimum, bisection on the analytic
    derivative polishes it.  When the bound keeps decreasing up to xi = 3
    (g below the curve minimum) there is no interior minimum; the value at
    xi = 3 is returned with interior=False.
    """
    g = _check_g(g)
    if n < 0:
        raise ValueError("n must be >= 0")

    xi = _golden_min(lambda t: ho_upper_bound(g, t, n).bound, _XI_MIN, CRITICAL_XI)

    if bound_derivative(g, CRITICAL_XI, n) < 0.0:
        est = ho_upper_bound(g, CRITICAL_XI, n)
        return OptimumResult(CRITICAL_XI, est, False, classify_branch(CRITICAL_XI))

    lo, hi = max(_XI_MIN, xi - 1e-6), min(CRITICAL_XI, xi + 1e-6)
    while bound_derivative(g, lo, n) > 0.0 and lo > _XI_MIN:
        lo = max(_XI_MIN, lo - 10.0 * (hi - lo))
    while bound_derivative(g, hi, n) < 0.0 and hi < CRITICAL_XI:
        hi = min(CRITICAL_XI, hi + 10.0 * (hi - lo))
    if bound_derivative(g, lo, n) <= 0.0 <= bound_derivative(g, hi, n):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if bound_derivative(g, mid, n) < 0.0:
                lo = mid
            else:
                hi = mid
        xi = 0.5 * (lo + hi)
    est = ho_upper_bound(g, xi, n)
    return OptimumResult(xi, est, True, classify_branch(xi))
