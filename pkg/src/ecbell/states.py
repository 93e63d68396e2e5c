"""Entangled coherent states ``N (|i eta, i sigma> - |-i eta, -i sigma>)``.

Only the real parameters and the normalization constant are stored; the
state vector itself is built on demand by :func:`ecbell.fock.build_state`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: below this value of eta^2 + sigma^2 (+ tau^2) the state is treated as the zero vector
DEGENERACY_EPS = 1e-12

_SERIES_CUTOFF = 1e-8


class DegenerateState(ValueError):
    """The superposition cancels: all state parameters are (numerically) zero."""


def one_minus_exp(x):
    """``1 - exp(-x)`` without cancellation for small ``x``; elementwise on arrays."""
    if isinstance(x, float):
        return x * (1.0 - 0.5 * x) if x < _SERIES_CUTOFF else -math.expm1(-x)
    x = np.asarray(x, dtype=float)
    small = x < _SERIES_CUTOFF
    out = np.where(small, x * (1.0 - 0.5 * x), -np.expm1(-np.where(small, 1.0, x)))
    return out if out.ndim else float(out)


def normalization(sq_sum: float) -> float:
    """``1/sqrt(2) * (1 - exp(-2 s))^(-1/2)`` for ``s = sum of squared parameters``."""
    return 1.0 / math.sqrt(2.0 * one_minus_exp(2.0 * sq_sum))


def _check(params):
    for p in params:
        if not math.isfinite(p):
            raise ValueError(f"state parameters must be finite, got {params}")
    s = sum(p * p for p in params)
    if s <= DEGENERACY_EPS:
        raise DegenerateState(
            f"state parameters {params} give a vanishing superposition "
            f"(sum of squares {s:.3g} <= {DEGENERACY_EPS:g})"
        )
    return s


@dataclass(frozen=True)
class BipartiteState:
    eta: float
    sigma: float
    norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "sigma", float(self.sigma))
        s = _check((self.eta, self.sigma))
        object.__setattr__(self, "norm", normalization(s))

    @property
    def params(self) -> tuple[float, float]:
        return (self.eta, self.sigma)

    @property
    def modes(self) -> int:
        return 2


@dataclass(frozen=True)
class TripartiteState:
    eta: float
    sigma: float
    tau: float
    norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "tau", float(self.tau))
        s = _check((self.eta, self.sigma, self.tau))
        object.__setattr__(self, "norm", normalization(s))

    @property
    def params(self) -> tuple[float, float, float]:
        return (self.eta, self.sigma, self.tau)

    @property
    def modes(self) -> int:
        return 3


def make_bipartite(eta: float, sigma: float) -> BipartiteState:
    """Two-mode entangled coherent state.

    Raises
    ------
    DegenerateState
        If ``eta**2 + sigma**2 <= DEGENERACY_EPS``.
    """
    return BipartiteState(eta, sigma)


def make_tripartite(eta: float, sigma: float, tau: float) -> TripartiteState:
    return TripartiteState(eta, sigma, tau)
