import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecbell import fock, presets
from ecbell.correlators import (
    CHSH_QUANTUM,
    BellSettings,
    Classification,
    MerminSettings,
    bell_chsh,
    bell_value,
    classify,
    correlator2,
    correlator3,
    correlator_kernel,
    mermin3,
    mermin_value,
)
from ecbell.states import make_bipartite, make_tripartite
from oracles import ecs_expectation, literal_correlator

small = st.floats(min_value=-1, max_value=1, allow_nan=False)
state_param = st.floats(min_value=0.1, max_value=2.0)
amps = st.builds(complex, small, small)


def test_zero_amplitudes_give_one():
    st2 = make_bipartite(1.3, 0.2)
    st3 = make_tripartite(0.4, 2.0, 0.05)
    assert correlator2(0, 0, st2) == 1.0
    assert correlator3(0, 0, 0, st3) == 1.0


def test_correlator2_against_oracle():
    st2 = make_bipartite(1, 0.5)
    o = fock.oracle_correlator((0.1 + 0.2j, -0.3j), st2, 40)
    assert abs(o.imag) < 1e-8
    assert correlator2(0.1 + 0.2j, -0.3j, st2) == pytest.approx(o.real, abs=1e-8)
    # frozen from the Fock oracle at dim 40
    assert correlator2(0.1 + 0.2j, -0.3j, st2) == pytest.approx(0.9117287296377771, abs=1e-12)


def test_correlator3_against_oracle():
    st3 = make_tripartite(1, 1, 1)
    o = fock.oracle_correlator((0.1, 0.1, 0.1), st3, 32)
    assert abs(o.imag) < 1e-8
    assert correlator3(0.1, 0.1, 0.1, st3) == pytest.approx(o.real, abs=1e-7)


@pytest.mark.parametrize("y,v,eta,sigma", [(0.3, -0.2, 1.0, 0.5), (-1.0, 0.4, 0.2, 3.0)])
def test_purely_imaginary_amplitudes(y, v, eta, sigma):
    st2 = make_bipartite(eta, sigma)
    n2 = st2.norm**2
    want = n2 * (
        2 * math.exp(-(y * y + v * v) / 2)
        - math.exp(-((y + 2 * eta) ** 2 + (v + 2 * sigma) ** 2) / 2)
        - math.exp(-((y - 2 * eta) ** 2 + (v - 2 * sigma) ** 2) / 2)
    )
    assert correlator2(1j * y, 1j * v, st2) == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_purely_imaginary_three_modes():
    st3 = make_tripartite(0.6, 0.9, 1.2)
    a = (0.2j, -0.4j, 0.1j)
    want = literal_correlator(a, st3.params)
    assert correlator3(*a, st3) == pytest.approx(want, rel=1e-12)


@settings(max_examples=200)
@given(amps, amps, state_param, state_param)
def test_correlator2_matches_literal_form(z, w, eta, sigma):
    st2 = make_bipartite(eta, sigma)
    assert correlator2(z, w, st2) == pytest.approx(literal_correlator((z, w), (eta, sigma)), abs=1e-12)


@settings(max_examples=200)
@given(amps, amps, amps, state_param, state_param, state_param)
def test_correlator3_matches_coherent_expansion(z, w, zeta, eta, sigma, tau):
    st3 = make_tripartite(eta, sigma, tau)
    ref = ecs_expectation((z, w, zeta), (eta, sigma, tau))
    assert abs(ref.imag) < 1e-12
    assert correlator3(z, w, zeta, st3) == pytest.approx(ref.real, abs=1e-12)


@given(amps, amps, state_param, state_param)
def test_real_part_flip_symmetry(z, w, eta, sigma):
    st2 = make_bipartite(eta, sigma)

    def flip(a):
        return complex(-a.real, a.imag)

    assert correlator2(z, w, st2) == pytest.approx(correlator2(flip(z), flip(w), st2), abs=1e-14)


def test_large_parameters_stay_finite():
    st2 = make_bipartite(60, 60)
    v = correlator2(0.01 + 0.9j, -0.01 - 0.9j, st2)
    assert math.isfinite(v) and abs(v) <= 1


def test_normalization_over_random_states():
    rng = np.random.default_rng(11)
    for _ in range(100):
        e, s, t = rng.uniform(-3, 3, 3)
        assert abs(correlator2(0, 0, make_bipartite(e, s)) - 1) < 1e-12
        assert abs(correlator3(0, 0, 0, make_tripartite(e, s, t)) - 1) < 1e-12
    # close to the degeneracy threshold the identity still holds
    assert abs(correlator2(0, 0, make_bipartite(2e-6, 0)) - 1) < 1e-12


def test_unitarity_ceiling():
    rng = np.random.default_rng(5)
    n = 20_000
    p = rng.uniform(-1, 1, size=(n, 6))
    eta, sigma, tau = rng.uniform(0.01, 5, size=(3, n))
    two = correlator_kernel((p[:, 0], p[:, 2]), (p[:, 1], p[:, 3]), (eta, sigma))
    three = correlator_kernel((p[:, 0], p[:, 2], p[:, 4]), (p[:, 1], p[:, 3], p[:, 5]), (eta, sigma, tau))
    assert np.abs(two).max() <= 1 + 1e-12
    assert np.abs(three).max() <= 1 + 1e-12


def test_bell_all_zero():
    s = BellSettings(0, 0, 0, 0, make_bipartite(1, 1))
    r = bell_chsh(s)
    assert r.value == pytest.approx(2.0, abs=1e-15)
    assert r.classification is Classification.CLASSICAL
    assert (r.bound_classical, r.bound_quantum) == (2.0, CHSH_QUANTUM)


def test_mermin_all_zero():
    r = mermin3(MerminSettings(0, 0, 0, 0, 0, 0, make_tripartite(1, 1, 1)))
    assert r.value == pytest.approx(2.0, abs=1e-15)
    assert r.classification is Classification.CLASSICAL
    assert r.bound_quantum == 4.0


def test_mermin_paper_point():
    r = mermin3(presets.mermin_paper())
    assert abs(r.value - 3.99383) < 5e-3
    assert r.classification is Classification.VIOLATION


def test_mermin_term_order():
    # the primed slot moves A -> B -> C, all-primed term subtracted
    s = MerminSettings(0.1, 0.3, 0.05j, -0.2, 0.02, 0.4, make_tripartite(1.1, 0.7, 0.9))
    st3 = s.state
    want = (
        correlator3(s.z_prime, s.w, s.zeta, st3)
        + correlator3(s.z, s.w_prime, s.zeta, st3)
        + correlator3(s.z, s.w, s.zeta_prime, st3)
        - correlator3(s.z_prime, s.w_prime, s.zeta_prime, st3)
    )
    assert mermin3(s).value == want
    assert mermin_value(s.to_vector()) == pytest.approx(want, abs=1e-15)


@settings(max_examples=50)
@given(amps, amps, amps, amps, st.floats(0.1, 1.5), st.floats(0.1, 1.5))
def test_bell_against_oracle(z, zp, w, wp, eta, sigma):
    s = BellSettings(z, zp, w, wp, make_bipartite(eta, sigma))
    st2 = s.state
    oracle = (
        fock.oracle_correlator((z, w), st2)
        + fock.oracle_correlator((zp, w), st2)
        + fock.oracle_correlator((z, wp), st2)
        - fock.oracle_correlator((zp, wp), st2)
    )
    assert bell_chsh(s).value == pytest.approx(oracle.real, abs=1e-7)


def test_mermin_against_oracle():
    rng = np.random.default_rng(2)
    for _ in range(5):
        a = rng.uniform(-0.5, 0.5, 12)
        e, s_, t = rng.uniform(0.1, 1.5, 3)
        settings_ = MerminSettings.from_vector(np.concatenate([a, [e, s_, t]]))
        st3 = settings_.state
        z, zp, w, wp, c, cp = (settings_.z, settings_.z_prime, settings_.w, settings_.w_prime,
                               settings_.zeta, settings_.zeta_prime)
        oracle = (
            fock.oracle_correlator((zp, w, c), st3)
            + fock.oracle_correlator((z, wp, c), st3)
            + fock.oracle_correlator((z, w, cp), st3)
            - fock.oracle_correlator((zp, wp, cp), st3)
        )
        assert mermin3(settings_).value == pytest.approx(oracle.real, abs=1e-6)


def test_vector_and_scalar_paths_agree():
    rng = np.random.default_rng(9)
    p = rng.uniform(-1, 1, size=(50, 10))
    p[:, 8:] = rng.uniform(0.05, 20, size=(50, 2))
    batch = bell_value(p)
    for row, v in zip(p, batch):
        assert bell_value(row) == pytest.approx(v, abs=1e-14)


def test_settings_vector_roundtrip():
    s = presets.bell_paper()
    assert BellSettings.from_vector(s.to_vector()) == s
    m = presets.mermin_paper()
    assert MerminSettings.from_vector(m.to_vector()) == m
    with pytest.raises(ValueError):
        BellSettings.from_vector([0] * 9)


@pytest.mark.parametrize(
    "value,cb,qb,want",
    [
        (1.9, 2, CHSH_QUANTUM, Classification.CLASSICAL),
        (-1.9, 2, CHSH_QUANTUM, Classification.CLASSICAL),
        (2.0 + 5e-10, 2, CHSH_QUANTUM, Classification.CLASSICAL),
        (2.23, 2, CHSH_QUANTUM, Classification.VIOLATION),
        (-2.5, 2, CHSH_QUANTUM, Classification.VIOLATION),
        (3.99383, 2, 4, Classification.VIOLATION),
        (4.0 + 5e-10, 2, 4, Classification.VIOLATION),
        (4.01, 2, 4, Classification.ABOVE_QUANTUM_BOUND),
    ],
)
def test_classify(value, cb, qb, want):
    assert classify(value, cb, qb) is want


def test_classify_rejects_bad_bounds():
    with pytest.raises(ValueError):
        classify(1.0, 3, 2)
