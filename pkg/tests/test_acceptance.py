"""Acceptance gate.  Each criterion prints one PASS/FAIL line in the summary."""
import json
import math
import time

import numpy as np
import pytest

from expwell import checks, cli, hobound, oracle, solver
from expwell.solver import Parity

SQRT2 = math.sqrt(2.0)
REF_BRACKET = (-0.81721, -0.81720)
C5_COUPLINGS = (1.0, SQRT2, 2.0, 5.0)


@pytest.fixture(scope="module")
def c5_runs():
    start = time.perf_counter()
    runs = {}
    for g in C5_COUPLINGS:
        states = solver.spectrum(g, 5, 1e-10)
        ref = oracle.fd_spectrum(g, oracle.FDGrid(g, 40.0, 16001), n_max=5)
        runs[g] = (states, ref)
    return runs, time.perf_counter() - start


def test_c1_ground_state_bracket(capsys, criterion):
    start = time.perf_counter()
    code = cli.main(["solve", "--g", repr(SQRT2), "--n", "0", "--tol", "1e-6", "--format", "json"])
    elapsed = time.perf_counter() - start
    doc = json.loads(capsys.readouterr().out)
    lo, hi = doc["results"]["state"]["energy_bracket"]
    # reference bracket widened by 5e-6 on each side
    inside = REF_BRACKET[0] - 5e-6 < lo < hi < REF_BRACKET[1] + 5e-6
    ok = code == 0 and inside and elapsed < 1.0
    criterion("C1 ground-state bracket", ok, f"[{lo:.9f}, {hi:.9f}] in {elapsed:.2f}s")
    assert code == 0
    assert inside
    assert elapsed < 1.0


def test_c2_fig1_constants(capsys, criterion):
    start = time.perf_counter()
    code = cli.main(["hobound", "--g", repr(SQRT2), "--omega", "1", "--format", "json"])
    elapsed = time.perf_counter() - start
    est = json.loads(capsys.readouterr().out)["results"]["estimate"]
    dm = abs(est["shift"] - 1.455938091)
    de = abs(est["bound"] + 0.455938091)
    ok = code == 0 and dm <= 1e-8 and de <= 1e-8 and elapsed < 0.1
    criterion("C2 omega=1 osculation constants", ok, f"|dM|={dm:.1e} |dE|={de:.1e} in {elapsed * 1000:.1f}ms")
    assert ok


def test_c3_critical_point(criterion):
    xi = hobound.curve_minimum(0.1, 10.0)
    ok = abs(xi - 3.0) <= 1e-4
    criterion("C3 curve minimum at 3", ok, f"xi0={xi:.7f}")
    assert ok


def test_c4_upper_bound_sweep(criterion):
    start = time.perf_counter()
    worst_margin = math.inf
    for g in (0.8, 1.0, SQRT2, 2.0, 3.0, 5.0):
        e0 = solver.solve_state(g, 0, 1e-10).energy
        for xi in np.geomspace(0.01, 10.0, 50):
            margin = hobound.ho_upper_bound(g, float(xi)).bound - e0
            worst_margin = min(worst_margin, margin)
    opt = hobound.optimal_xi(SQRT2).estimate.bound
    elapsed = time.perf_counter() - start
    ok = worst_margin > 0 and -0.8172 < opt < -0.455938 and elapsed < 30.0
    criterion(
        "C4 upper-bound sweep", ok, f"min margin={worst_margin:.3e} opt(sqrt2)={opt:.6f} in {elapsed:.1f}s"
    )
    assert worst_margin > 0
    assert -0.8172 < opt < -0.455938
    assert elapsed < 30.0


@pytest.mark.parametrize("g", C5_COUPLINGS, ids=["g=1", "g=sqrt2", "g=2", "g=5"])
def test_c5_oracle_equivalence(g, c5_runs, criterion):
    runs, elapsed = c5_runs
    states, ref = runs[g]
    n = min(len(states), len(ref.energies))
    deltas = [abs(s.energy - e) for s, e in zip(states[:n], ref.energies[:n])]
    worst = max(deltas)
    same_count = len(states) == len(ref.energies)
    ok = same_count and worst <= 1e-4 and elapsed < 120.0
    criterion(
        "C5 oracle equivalence (L=40, N=16001)",
        ok,
        f"g={g:.6g}: {len(states)} vs {len(ref.energies)} levels, max|dE|={worst:.1e}",
    )
    assert same_count
    assert worst <= 1e-4, f"per-level |dE| = {['%.2e' % d for d in deltas]}"
    assert elapsed < 120.0


def test_c6_property_suites(criterion):
    lines = []
    spec = checks.check_specfun()
    spec_worst = max(r.worst for r in spec if r.name in ("wronskian", "recurrence", "half_integer"))
    lines.append(f"specfun {spec_worst:.1e}")
    ok_spec = spec_worst <= 1e-11

    sol = checks.check_solver(n_trials=1000)
    ok_sol = all(r.passed for r in sol)
    lines.append("solver " + ",".join(f"{r.name}={r.worst:.1e}" for r in sol[:3]))

    hob = checks.check_hobound()
    ok_hob = hob[0].passed
    lines.append(f"majorization {hob[0].worst:.1e}")

    g = 2.0
    ks = np.linspace(0.01, g, 203)
    ks = ks[np.abs(2 * ks - np.round(2 * ks)) > 1e-3][:200]
    counts = [solver.node_count(solver.matched_solution(float(k), g, Parity.EVEN)) for k in ks]
    ok_nodes = len(ks) == 200 and bool(np.all(np.isin(np.diff(counts), [0, -1])))
    lines.append(f"node law steps={sorted(set(np.diff(counts).tolist()))}")

    ok = ok_spec and ok_sol and ok_hob and ok_nodes
    criterion("C6 property suites", ok, "; ".join(lines))
    assert ok_spec and ok_sol and ok_hob and ok_nodes


def _certified(st_):
    lo, hi = st_.bracket.k_lo, st_.bracket.k_hi
    a_lo = solver.tail_coefficient(lo, st_.g, st_.parity)
    a_hi = solver.tail_coefficient(hi, st_.g, st_.parity)
    n_lo = solver.node_count(solver.matched_solution(lo, st_.g, st_.parity))
    n_hi = solver.node_count(solver.matched_solution(hi, st_.g, st_.parity))
    return a_lo * a_hi < 0 and n_lo != n_hi


def test_c7_two_sided_certification(c5_runs, criterion):
    runs, _ = c5_runs
    states = [solver.solve_state(SQRT2, 0, 1e-6)]
    states += [s for g in C5_COUPLINGS for s in runs[g][0]]
    bad = [(s.g, s.n) for s in states if not _certified(s)]
    ok = not bad
    criterion("C7 two-sided certification", ok, f"{len(states)} brackets, uncertified={bad}")
    assert ok
