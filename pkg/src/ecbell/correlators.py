"""Closed-form displacement correlators and their Bell-CHSH / Mermin combinations.

For an n-mode entangled coherent state with real parameters ``p_k`` and
displacement amplitudes ``a_k = x_k + i y_k`` one has

    <D(a_1) ... D(a_n)> = N^2 [ 2 e^{-A} cos(theta) - e^{-B_+} - e^{-B_-} ]

with ``A = sum |a_k|^2 / 2``, ``theta = 2 sum p_k x_k`` and
``B_pm = sum |a_k +- 2i p_k|^2 / 2 = A + 2 s +- 2 q`` where
``s = sum p_k^2`` and ``q = sum p_k y_k``.  Factoring out ``e^{-A}`` and
dividing by ``2 N^{-2} = 1 - e^{-2s}`` gives the form evaluated here,

    e^{-A} [ -2 sin^2(theta/2) - (expm1(-2(s+q)) + expm1(-2(s-q))) / 2 ] / (1 - e^{-2s})

which has no cancellation at small ``s`` and reproduces the normalization
identity ``<1> = 1`` exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .states import (
    DEGENERACY_EPS,
    BipartiteState,
    TripartiteState,
    one_minus_exp,
)
from .weyl import ComplexAmplitude, as_amplitude

CHSH_CLASSICAL = 2.0
CHSH_QUANTUM = 2.0 * math.sqrt(2.0)
MERMIN_CLASSICAL = 2.0
MERMIN_QUANTUM = 4.0

CLASSIFY_TOL = 1e-9

BELL_PARAM_NAMES = ("x", "y", "x_p", "y_p", "u", "v", "u_p", "v_p", "eta", "sigma")
MERMIN_PARAM_NAMES = (
    "x", "y", "x_p", "y_p", "u", "v", "u_p", "v_p",
    "zr", "zi", "zr_p", "zi_p", "eta", "sigma", "tau",
)


class Classification(str, Enum):
    CLASSICAL = "classical"
    VIOLATION = "violation"
    ABOVE_QUANTUM_BOUND = "above_quantum_bound"


def classify(value: float, classical_bound: float, quantum_bound: float) -> Classification:
    """Place ``|value|`` relative to the classical and quantum bounds.

    ``ABOVE_QUANTUM_BOUND`` is diagnostic only; a correct evaluation never
    produces it.
    """
    if not (0 < classical_bound < quantum_bound):
        raise ValueError("need 0 < classical_bound < quantum_bound")
    v = abs(value)
    if v <= classical_bound + CLASSIFY_TOL:
        return Classification.CLASSICAL
    if v <= quantum_bound + CLASSIFY_TOL:
        return Classification.VIOLATION
    return Classification.ABOVE_QUANTUM_BOUND


@dataclass(frozen=True)
class CorrelatorValue:
    value: float
    classification: Classification
    bound_classical: float
    bound_quantum: float

    @classmethod
    def from_value(cls, value, classical, quantum):
        value = float(value)
        return cls(value, classify(value, classical, quantum), classical, quantum)


# -- vectorised kernel -------------------------------------------------------


def correlator_kernel(re, im, params):
    """Expectation of a product of displacements in an n-mode state.

    Parameters
    ----------
    re, im, params : sequence of array_like
        Per-mode real parts, imaginary parts and state parameters. All
        entries broadcast against each other.

    Returns
    -------
    ndarray or float
        NaN where the state is degenerate.
    """
    re = [np.asarray(r, dtype=float) for r in re]
    im = [np.asarray(i, dtype=float) for i in im]
    params = [np.asarray(p, dtype=float) for p in params]

    half_abs2 = 0.5 * sum(r * r + i * i for r, i in zip(re, im))
    theta = 2.0 * sum(p * r for p, r in zip(params, re))
    s = sum(p * p for p in params)
    q = sum(p * i for p, i in zip(params, im))

    numerator = -2.0 * np.sin(0.5 * theta) ** 2 - 0.5 * (
        np.expm1(-2.0 * (s + q)) + np.expm1(-2.0 * (s - q))
    )
    degenerate = s <= DEGENERACY_EPS
    denom = one_minus_exp(np.where(degenerate, 1.0, 2.0 * s))
    out = np.where(degenerate, np.nan, np.exp(-half_abs2) * numerator / denom)
    return out if out.ndim else float(out)


def _kernel_scalar(re, im, params):
    # float-only twin of correlator_kernel; ~30x faster inside the optimizer loop
    half_abs2 = 0.0
    theta = s = q = 0.0
    for r, i, p in zip(re, im, params):
        half_abs2 += r * r + i * i
        theta += p * r
        s += p * p
        q += p * i
    if s <= DEGENERACY_EPS:
        return math.nan
    half_abs2 *= 0.5
    theta *= 2.0
    numerator = -2.0 * math.sin(0.5 * theta) ** 2 - 0.5 * (
        math.expm1(-2.0 * (s + q)) + math.expm1(-2.0 * (s - q))
    )
    return math.exp(-half_abs2) * numerator / one_minus_exp(2.0 * s)


def correlator2(z, w, state: BipartiteState) -> float:
    """``<psi_AB| D_a(z) D_b(w) |psi_AB>``; real, and in [-1, 1]."""
    z, w = as_amplitude(z), as_amplitude(w)
    return correlator_kernel((z.re, w.re), (z.im, w.im), state.params)


def correlator3(z, w, zeta, state: TripartiteState) -> float:
    """``<psi_ABC| D_a(z) D_b(w) D_c(zeta) |psi_ABC>``."""
    z, w, zeta = as_amplitude(z), as_amplitude(w), as_amplitude(zeta)
    return correlator_kernel((z.re, w.re, zeta.re), (z.im, w.im, zeta.im), state.params)


def bell_value(params):
    """CHSH combination for parameter arrays of shape ``(..., 10)``.

    Column order is :data:`BELL_PARAM_NAMES`.
    """
    p = np.asarray(params, dtype=float)
    if p.ndim == 1:
        p = p.tolist()
        kernel = _kernel_scalar
    else:
        p = np.moveaxis(p, -1, 0)
        kernel = correlator_kernel
    x, y, xp, yp, u, v, up, vp, eta, sigma = p
    st = (eta, sigma)

    def c(a_re, a_im, b_re, b_im):
        return kernel((a_re, b_re), (a_im, b_im), st)

    return c(x, y, u, v) + c(xp, yp, u, v) + c(x, y, up, vp) - c(xp, yp, up, vp)


def mermin_value(params):
    """Mermin combination ``A'BC + AB'C + ABC' - A'B'C'`` for arrays of shape ``(..., 15)``.

    Column order is :data:`MERMIN_PARAM_NAMES`.
    """
    p = np.asarray(params, dtype=float)
    if p.ndim == 1:
        p = p.tolist()
        kernel = _kernel_scalar
    else:
        p = np.moveaxis(p, -1, 0)
        kernel = correlator_kernel
    x, y, xp, yp, u, v, up, vp, zr, zi, zrp, zip_, eta, sigma, tau = p
    st = (eta, sigma, tau)
    a, ap = (x, y), (xp, yp)
    b, bp = (u, v), (up, vp)
    c, cp = (zr, zi), (zrp, zip_)

    def c3(ai, bj, ck):
        return kernel((ai[0], bj[0], ck[0]), (ai[1], bj[1], ck[1]), st)

    return c3(ap, b, c) + c3(a, bp, c) + c3(a, b, cp) - c3(ap, bp, cp)


# -- settings records --------------------------------------------------------


@dataclass(frozen=True)
class BellSettings:
    z: ComplexAmplitude
    z_prime: ComplexAmplitude
    w: ComplexAmplitude
    w_prime: ComplexAmplitude
    state: BipartiteState

    def __post_init__(self):
        for name in ("z", "z_prime", "w", "w_prime"):
            object.__setattr__(self, name, as_amplitude(getattr(self, name)))

    def to_vector(self) -> np.ndarray:
        amps = (self.z, self.z_prime, self.w, self.w_prime)
        return np.array([c for a in amps for c in (a.re, a.im)] + list(self.state.params))

    @classmethod
    def from_vector(cls, vec) -> BellSettings:
        v = [float(t) for t in vec]
        if len(v) != len(BELL_PARAM_NAMES):
            raise ValueError(f"expected {len(BELL_PARAM_NAMES)} parameters, got {len(v)}")
        amps = [ComplexAmplitude(v[k], v[k + 1]) for k in range(0, 8, 2)]
        return cls(*amps, BipartiteState(v[8], v[9]))


@dataclass(frozen=True)
class MerminSettings:
    z: ComplexAmplitude
    z_prime: ComplexAmplitude
    w: ComplexAmplitude
    w_prime: ComplexAmplitude
    zeta: ComplexAmplitude
    zeta_prime: ComplexAmplitude
    state: TripartiteState

    def __post_init__(self):
        for name in ("z", "z_prime", "w", "w_prime", "zeta", "zeta_prime"):
            object.__setattr__(self, name, as_amplitude(getattr(self, name)))

    def to_vector(self) -> np.ndarray:
        amps = (self.z, self.z_prime, self.w, self.w_prime, self.zeta, self.zeta_prime)
        return np.array([c for a in amps for c in (a.re, a.im)] + list(self.state.params))

    @classmethod
    def from_vector(cls, vec) -> MerminSettings:
        v = [float(t) for t in vec]
        if len(v) != len(MERMIN_PARAM_NAMES):
            raise ValueError(f"expected {len(MERMIN_PARAM_NAMES)} parameters, got {len(v)}")
        amps = [ComplexAmplitude(v[k], v[k + 1]) for k in range(0, 12, 2)]
        return cls(*amps, TripartiteState(v[12], v[13], v[14]))


def bell_chsh(s: BellSettings) -> CorrelatorValue:
    value = (
        correlator2(s.z, s.w, s.state)
        + correlator2(s.z_prime, s.w, s.state)
        + correlator2(s.z, s.w_prime, s.state)
        - correlator2(s.z_prime, s.w_prime, s.state)
    )
    return CorrelatorValue.from_value(value, CHSH_CLASSICAL, CHSH_QUANTUM)


def mermin3(s: MerminSettings) -> CorrelatorValue:
    st = s.state
    value = (
        correlator3(s.z_prime, s.w, s.zeta, st)
        + correlator3(s.z, s.w_prime, s.zeta, st)
        + correlator3(s.z, s.w, s.zeta_prime, st)
        - correlator3(s.z_prime, s.w_prime, s.zeta_prime, st)
    )
    return CorrelatorValue.from_value(value, MERMIN_CLASSICAL, MERMIN_QUANTUM)
