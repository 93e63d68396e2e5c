"""Truncated number-basis realization, used as an independent check.

Everything here is brute force: displacement operators are matrix
exponentials of ``z a^dag - z^* a`` on the first ``dim`` Fock levels, states
are built by applying those matrices to the vacuum, and expectation values
are direct contractions. Nothing from :mod:`ecbell.correlators` is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .states import BipartiteState, TripartiteState
from .weyl import as_amplitude


class InvalidDim(ValueError):
    pass


class TruncationError(ValueError):
    """The requested Fock dimension is too small for the displacement involved."""


class DimMismatch(ValueError):
    pass


def required_dim(r: float) -> int:
    """Smallest accepted truncation for displacements of magnitude up to ``r``.

    ``ceil(r^2 + 8 r + 12)``: the Poisson mean plus eight standard deviations
    of a coherent state, plus a fixed guard band against the reflection at
    the truncation edge. ``r = 0`` needs no room at all.
    """
    r = abs(float(r))
    if r == 0.0:
        return 1
    return math.ceil(r * r + 8.0 * r + 12.0)


def max_displacement(dim: int) -> float:
    """Inverse of :func:`required_dim`: the largest ``r`` accepted at ``dim``."""
    if dim < 12:
        return 0.0
    return math.sqrt(4.0 + dim) - 4.0


def _require(r, dim, what):
    need = required_dim(r)
    if dim < need:
        raise TruncationError(
            f"{what}: displacement magnitude {r:.4g} needs dim >= {need}, got {dim}"
        )


@dataclass(frozen=True, eq=False)
class FockOperator:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dag(self) -> FockOperator:
        return FockOperator(self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.entries @ other.entries)
        return NotImplemented

    def __mul__(self, scalar):
        return FockOperator(self.entries * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class FockVector:
    entries: np.ndarray
    dim: int
    modes: int

    def __post_init__(self):
        v = np.asarray(self.entries, dtype=complex).reshape(-1)
        if v.size != self.dim**self.modes:
            raise DimMismatch(f"vector of length {v.size} is not {self.dim}^{self.modes}")
        object.__setattr__(self, "entries", v)

    def tensor(self) -> np.ndarray:
        return self.entries.reshape((self.dim,) * self.modes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


def identity(dim: int) -> FockOperator:
    return FockOperator(np.eye(dim, dtype=complex))


def ladder_matrices(dim: int) -> tuple[FockOperator, FockOperator]:
    """Annihilation and creation operators truncated to ``dim`` levels."""
    if dim < 2:
        raise InvalidDim(f"dim must be >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    return FockOperator(a), FockOperator(a.conj().T)


def displacement_matrix(z, dim: int, *, check: bool = True) -> FockOperator:
    """``expm(z a^dag - z^* a)`` on ``dim`` levels.

    The truncated generator is anti-Hermitian, so the result is unitary on
    the whole truncated space; it only matches the true operator on the low
    levels, which is what ``check`` guards.
    """
    z = complex(as_amplitude(z))
    if check:
        _require(abs(z), dim, "displacement_matrix")
    if z == 0:
        return identity(dim)
    a, ad = ladder_matrices(dim)
    gen = z * ad.entries - z.conjugate() * a.entries
    return FockOperator(scipy.linalg.expm(gen))


def vacuum(dim: int, modes: int = 1) -> FockVector:
    v = np.zeros(dim**modes, dtype=complex)
    v[0] = 1.0
    return FockVector(v, dim, modes)


def apply_local(ops, v: FockVector) -> FockVector:
    """Apply ``ops[0] (x) ops[1] (x) ...`` to ``v`` one mode at a time.

    ``None`` entries stand for the identity.
    """
    if len(ops) != v.modes:
        raise DimMismatch(f"{len(ops)} operators for a {v.modes}-mode vector")
    t = v.tensor()
    for axis, op in enumerate(ops):
        if op is None:
            continue
        if op.dim != v.dim:
            raise DimMismatch(f"operator dim {op.dim} != vector dim {v.dim}")
        t = np.moveaxis(np.tensordot(op.entries, t, axes=([1], [axis])), 0, axis)
    return FockVector(t, v.dim, v.modes)


def build_state(state: BipartiteState | TripartiteState, dim: int, *, check: bool = True) -> FockVector:
    """State vector ``N (D(i p_1) (x) ... - D(-i p_1) (x) ...) |0...0>``."""
    params = state.params
    if check:
        _require(max(abs(p) for p in params), dim, "build_state")
    # D(i p)|0> and D(-i p)|0> are the first columns of the matrices
    plus = [displacement_matrix(1j * p, dim, check=False).entries[:, 0] for p in params]
    minus = [displacement_matrix(-1j * p, dim, check=False).entries[:, 0] for p in params]

    def product(cols):
        out = cols[0]
        for c in cols[1:]:
            out = np.multiply.outer(out, c)
        return out

    t = state.norm * (product(plus) - product(minus))
    return FockVector(t, dim, len(params))


def expectation(op_a: FockOperator, op_b: FockOperator, op_c: FockOperator | None, v: FockVector) -> complex:
    """``<v| op_a (x) op_b [(x) op_c] |v>`` without forming the Kronecker product."""
    ops = [op_a, op_b] if op_c is None else [op_a, op_b, op_c]
    if len(ops) != v.modes:
        raise DimMismatch(f"{len(ops)} operators for a {v.modes}-mode vector")
    w = apply_local(ops, v)
    return complex(np.vdot(v.entries, w.entries))


def half_block(m) -> np.ndarray:
    m = m.entries if isinstance(m, FockOperator) else np.asarray(m)
    h = m.shape[0] // 2
    return m[:h, :h]


def displacement_product(amplitudes, dim: int) -> FockOperator:
    """Leading ``dim x dim`` block of ``D(a_1) D(a_2) ...``.

    A product of truncated matrices is not the truncation of the product:
    the inner sums lose the levels above ``dim``. The factors are therefore
    built in a space padded by ``required_dim(sum |a_k|)`` and cut afterwards.
    """
    amps = [complex(as_amplitude(a)) for a in amplitudes]
    work = dim + required_dim(sum(abs(a) for a in amps))
    m = np.eye(work, dtype=complex)
    for a in amps:
        m = m @ displacement_matrix(a, work, check=False).entries
    return FockOperator(m[:dim, :dim])


def hermitian_decomposition_check(z, dim: int) -> tuple[float, float]:
    """Split ``D(z) = M + iN`` into Hermitian parts and test the unitarity conditions.

    Returns
    -------
    commutator, circle : float
        Max-norms of ``[M, N]`` and ``M^2 + N^2 - I`` on the leading half block.
    """
    d = displacement_matrix(z, dim).entries
    dd = d.conj().T
    m = 0.5 * (d + dd)
    n = (d - dd) / 2j
    comm = m @ n - n @ m
    circle = m @ m + n @ n - np.eye(dim)
    return float(np.abs(half_block(comm)).max()), float(np.abs(half_block(circle)).max())


def oracle_correlator(
    amplitudes, state: BipartiteState | TripartiteState, dim: int | None = None, *, check: bool = True
) -> complex:
    """Brute-force ``<psi| D(a_1) (x) ... |psi>`` for one amplitude per mode.

    With ``dim=None`` the smallest admissible truncation is used.
    """
    amps = [complex(as_amplitude(a)) for a in amplitudes]
    if len(amps) != state.modes:
        raise DimMismatch(f"{len(amps)} amplitudes for a {state.modes}-mode state")
    # D(a) D(+-i p)|0> is a coherent state of magnitude at most |a| + |p|
    r = max(abs(a) + abs(p) for a, p in zip(amps, state.params))
    if dim is None:
        dim = max(required_dim(r), 2)
    elif check:
        _require(r, dim, "oracle_correlator")
    v = build_state(state, dim, check=False)
    ops = [displacement_matrix(a, dim, check=False) for a in amps]
    return complex(np.vdot(v.entries, apply_local(ops, v).entries))
