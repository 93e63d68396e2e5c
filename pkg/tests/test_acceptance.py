"""Acceptance checks, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
Tolerances and budgets below are the acceptance thresholds; do not loosen them.
"""
import math
import time

import numpy as np
import pytest

from ecbell import fock, presets
from ecbell.correlators import CHSH_QUANTUM, MERMIN_QUANTUM, correlator2, correlator3, mermin3
from ecbell.optimize import ScanSpec, default_bounds, evaluate, maximize, scan
from ecbell.states import make_bipartite, make_tripartite
from ecbell.weyl import compose, conjugate_sandwich, label

MERMIN_TARGET, MERMIN_TOL, MERMIN_BUDGET_S = 3.99383, 5e-3, 1e-3
BELL_WINDOW, BELL_SCAN_BUDGET_S = (2.20, 2.27), 10.0
ORACLE_DRAWS, ORACLE_TOL, ORACLE_IMAG_TOL, ORACLE_BUDGET_S = 200, 1e-6, 1e-7, 60.0
NORM_STATES, NORM_TOL = 100, 1e-12
BOUND_DRAWS, BOUND_SLACK = 100_000, 1e-6
WEYL_DIM, WEYL_TOL = 32, 1e-7
HERM_DIM, HERM_DRAWS, HERM_TOL = 48, 20, 1e-7
BELL_OPT_FLOOR, MERMIN_OPT_FLOOR = 2.20, 3.9938


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def optimizer_runs():
    bell = maximize("bell", starts=64, rng_seed=1)
    mermin = maximize("mermin", starts=1, x0=presets.mermin_paper().to_vector())
    return {"bell": bell, "mermin": mermin}


def unit_disk(rng, n, radius=1.0):
    r = radius * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def test_mermin_headline(report):
    s = presets.mermin_paper()
    value = mermin3(s).value
    reps = 200
    t0 = time.perf_counter()
    for _ in range(reps):
        mermin3(s)
    per_call = (time.perf_counter() - t0) / reps
    ok = abs(value - MERMIN_TARGET) <= MERMIN_TOL and per_call < MERMIN_BUDGET_S
    report("mermin headline", ok, f"value {value:.6f} (target {MERMIN_TARGET} +- {MERMIN_TOL}), {per_call * 1e6:.1f} us/eval")


def test_bell_headline_scan(report):
    spec = ScanSpec(presets.BELL_SCAN["eta"], presets.BELL_SCAN["sigma"], presets.BELL_AMPLITUDES)
    t0 = time.perf_counter()
    r = scan(spec, "bell", threads=1)
    elapsed = time.perf_counter() - t0
    n_viol = int(r.violated.sum())
    lo, hi = BELL_WINDOW
    ok = r.values.shape == (240, 240) and lo <= r.max <= hi and n_viol > 0 and elapsed < BELL_SCAN_BUDGET_S
    report(
        "bell headline scan",
        ok,
        f"max {r.max:.6f} at (eta, sigma) = {r.argmax}, {n_viol} violating cells, {elapsed:.2f} s",
    )


def test_oracle_equivalence(report):
    rng = np.random.default_rng(2024)
    worst2 = worst3 = worst_imag = 0.0
    t0 = time.perf_counter()
    for _ in range(ORACLE_DRAWS):
        eta, sigma, tau = rng.uniform(0.1, 1.5, 3)
        z, w, c = unit_disk(rng, 3)
        st2, st3 = make_bipartite(eta, sigma), make_tripartite(eta, sigma, tau)
        o2 = fock.oracle_correlator((z, w), st2)
        o3 = fock.oracle_correlator((z, w, c), st3)
        worst2 = max(worst2, abs(o2.real - correlator2(z, w, st2)))
        worst3 = max(worst3, abs(o3.real - correlator3(z, w, c, st3)))
        worst_imag = max(worst_imag, abs(o2.imag), abs(o3.imag))
    elapsed = time.perf_counter() - t0
    ok = worst2 < ORACLE_TOL and worst3 < ORACLE_TOL and worst_imag < ORACLE_IMAG_TOL and elapsed < ORACLE_BUDGET_S
    report(
        "oracle equivalence",
        ok,
        f"{ORACLE_DRAWS} draws, worst |d2| {worst2:.2e}, |d3| {worst3:.2e}, |imag| {worst_imag:.2e}, {elapsed:.1f} s",
    )


def test_normalization_identity(report):
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(NORM_STATES):
        eta, sigma, tau = rng.uniform(-5, 5, 3)
        worst = max(
            worst,
            abs(correlator2(0, 0, make_bipartite(eta, sigma)) - 1),
            abs(correlator3(0, 0, 0, make_tripartite(eta, sigma, tau)) - 1),
        )
    report("normalization identity", worst < NORM_TOL, f"{NORM_STATES} states, worst deviation {worst:.2e}")


def test_bound_respect(report, optimizer_runs):
    rng = np.random.default_rng(7)
    peaks = {}
    for kind in ("bell", "mermin"):
        box = np.array(default_bounds(kind))
        n_amp = box.shape[0] - (2 if kind == "bell" else 3)
        half = BOUND_DRAWS // 2
        # half inside the optimizer box, half over a wider range
        inside = rng.uniform(box[:, 0], box[:, 1], size=(half, box.shape[0]))
        wide = np.empty((BOUND_DRAWS - half, box.shape[0]))
        wide[:, :n_amp] = rng.uniform(-2, 2, size=(wide.shape[0], n_amp))
        wide[:, n_amp:] = rng.uniform(0.01, 60, size=(wide.shape[0], box.shape[0] - n_amp))
        vals = evaluate(kind, np.vstack([inside, wide]))
        peaks[kind] = max(float(np.nanmax(np.abs(vals))), abs(optimizer_runs[kind].best_value))
    ok = peaks["bell"] <= CHSH_QUANTUM + BOUND_SLACK and peaks["mermin"] <= MERMIN_QUANTUM + BOUND_SLACK
    report(
        "bound respect",
        ok,
        f"{BOUND_DRAWS} draws per kind plus optimizer outputs; max |bell| {peaks['bell']:.8f} "
        f"(<= {CHSH_QUANTUM:.8f}), max |mermin| {peaks['mermin']:.8f} (<= 4)",
    )


def test_weyl_consistency(report):
    rng = np.random.default_rng(31)
    dim = WEYL_DIM
    worst = 0.0
    for _ in range(25):
        z, zp = unit_disk(rng, 2)
        eta = rng.uniform(-1, 1)

        def gap(ops, lab):
            lhs = fock.displacement_product(ops, dim).entries
            rhs = lab.factor() * fock.displacement_product([complex(lab.amplitude)], dim).entries
            return np.abs(fock.half_block(lhs - rhs)).max()

        worst = max(
            worst,
            gap([z, zp], compose(label(z), label(zp))),
            gap([z, 1j * eta], compose(label(z), label(1j * eta))),
            gap([-1j * eta, z, 1j * eta], conjugate_sandwich(z, eta, "dag_pos")),
            gap([1j * eta, z, -1j * eta], conjugate_sandwich(z, eta, "pos_neg")),
            gap([1j * eta, z, 1j * eta], conjugate_sandwich(z, eta, "pos_pos")),
        )
    report("weyl consistency", worst < WEYL_TOL, f"dim {dim}, 25 draws x 5 identities, worst half-block gap {worst:.2e}")


def test_hermitian_decomposition(report):
    rng = np.random.default_rng(48)
    worst = 0.0
    for z in unit_disk(rng, HERM_DRAWS):
        worst = max(worst, *fock.hermitian_decomposition_check(z, HERM_DIM))
    report("hermitian decomposition", worst < HERM_TOL, f"{HERM_DRAWS} draws at dim {HERM_DIM}, worst residual {worst:.2e}")


def test_optimizer_attainability(report, optimizer_runs):
    b, m = optimizer_runs["bell"], optimizer_runs["mermin"]
    ok = b.best_value >= BELL_OPT_FLOOR and m.best_value >= MERMIN_OPT_FLOOR
    report(
        "optimizer attainability",
        ok,
        f"bell {b.best_value:.6f} (64 starts, seed 1, {b.n_evaluations} evals); "
        f"mermin warm start {m.best_value:.6f} (converged={m.converged})",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
