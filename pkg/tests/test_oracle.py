import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from expwell import oracle
from expwell.oracle import FDGrid

SQRT2 = math.sqrt(2.0)


# --- grid ---------------------------------------------------------------


def test_grid_geometry():
    grid = FDGrid(1e-3, 10.0, 401)
    assert grid.spacing == pytest.approx(20.0 / 402)
    x = grid.x
    assert x.size == 401
    assert x[200] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(x, -x[::-1])
    fine = grid.refined()
    assert fine.n_points == 803
    assert fine.spacing == pytest.approx(grid.spacing / 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(coupling=1.0, half_width=40.0, n_points=100),
        dict(coupling=1.0, half_width=40.0, n_points=1000),
        dict(coupling=1.0, half_width=0.0, n_points=1001),
        dict(coupling=5.0, half_width=20.0, n_points=1001),
    ],
)
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        FDGrid(**kwargs)


def test_matrix_entries():
    grid = FDGrid(2.0, 30.0, 301)
    diag, off = grid.matrix()
    h = grid.spacing
    assert off == pytest.approx(-1 / h**2)
    assert diag[150] == pytest.approx(2 / h**2 - 4.0)


# --- Sturm count ----------------------------------------------------------


@given(st.integers(0, 2**32 - 1), st.floats(-3.0, 3.0))
@settings(max_examples=60, deadline=None)
def test_sturm_count_matches_dense_eigenvalues(seed, sigma):
    rng = np.random.default_rng(seed)
    diag = rng.uniform(-2, 2, 40)
    off = float(rng.uniform(-1, -0.1))
    eig = eigh_tridiagonal(diag, np.full(39, off), eigvals_only=True)
    assume_gap = np.min(np.abs(eig - sigma))
    if assume_gap < 1e-9:
        return
    assert oracle.sturm_count(diag, off, sigma) == int(np.sum(eig < sigma))


def test_bisection_matches_library_eigenvalues():
    grid = FDGrid(3.0, 30.0, 1201)
    diag, off = grid.matrix()
    ref = eigh_tridiagonal(diag, np.full(diag.size - 1, off), eigvals_only=True, select="i", select_range=(0, 3))
    ours = oracle._grid_spectrum(grid, 4)
    assert np.allclose(ours, ref, atol=1e-10)


# --- spectrum -------------------------------------------------------------


def test_reference_ground_state():
    res = oracle.fd_spectrum(SQRT2, FDGrid(SQRT2, 40.0, 16001))
    e0 = res.energies[0]
    assert e0 == pytest.approx(-0.8172, abs=1e-4)
    assert res.richardson_error[0] < 1e-5


def test_grid_convergence_is_second_order():
    g = 2.0
    e = [oracle._grid_spectrum(FDGrid(g, 30.0, n), 1)[0] for n in (1001, 2003, 4007)]
    factor = (e[0] - e[1]) / (e[1] - e[2])
    assert 3.0 <= factor <= 5.0


@pytest.mark.parametrize("g", [1.0, 5.0])
def test_box_independence_for_deep_levels(g):
    # walls act like exp(-2 k L); these couplings have no level with k < 0.4
    a = oracle._grid_spectrum(FDGrid(g, 40.0, 8001), 6)
    b = oracle._grid_spectrum(FDGrid(g, 80.0, 16003), 6)
    assert len(a) == len(b)
    assert np.allclose(a, b, atol=1e-10, rtol=0)


def test_vanishing_well():
    res = oracle.fd_spectrum(1e-4, n_max=3)
    assert len(res.energies) <= 1
    for e in res.energies:
        assert -1e-6 < e < 0


def test_strict_mode_reports_missing_levels():
    with pytest.raises(oracle.GridTooSmallError):
        oracle.fd_spectrum(1.0, n_max=3, strict=True)
    assert len(oracle.fd_spectrum(1.0, n_max=3).energies) == 1


def test_spectrum_argument_checks():
    with pytest.raises(ValueError):
        oracle.fd_spectrum(1.0, FDGrid(2.0), 0)
    with pytest.raises(ValueError):
        oracle.fd_spectrum(1.0, n_max=-1)


def test_result_dict():
    d = oracle.fd_spectrum(1.0, FDGrid(1.0, 40.0, 2001)).to_dict()
    assert d["n_points"] == 4003
    assert len(d["energies"]) == len(d["richardson_error"]) == 1


# --- eigenvectors -----------------------------------------------------------


def _interior_sign_changes(v, tol=1e-8):
    s = np.sign(v[np.abs(v) > tol])
    return int(np.sum(s[1:] != s[:-1]))


def test_ground_eigenvector_has_no_node():
    x, v = oracle.fd_eigenvector(SQRT2, FDGrid(SQRT2, 40.0, 4001), n=0)
    assert np.max(np.abs(v)) == pytest.approx(1.0)
    assert _interior_sign_changes(v) == 0
    assert np.all(v[np.abs(v) > 1e-8] > 0)
    assert np.allclose(v, v[::-1], atol=1e-9)


def test_first_excited_eigenvector_is_odd_with_central_node():
    x, v = oracle.fd_eigenvector(2.0, FDGrid(2.0, 40.0, 4001), n=1)
    assert _interior_sign_changes(v) == 1
    assert np.allclose(v, -v[::-1], atol=1e-9)
    centre = x.size // 2
    assert abs(v[centre]) < 1e-9
    assert v[centre + 1] > 0


def test_eigenvector_missing_level():
    with pytest.raises(oracle.OracleError):
        oracle.fd_eigenvector(1.0, FDGrid(1.0, 40.0, 2001), n=2)
