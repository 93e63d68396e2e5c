"""Grid scans over the state parameters and multi-start simplex maximization."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .correlators import (
    BELL_PARAM_NAMES,
    CHSH_CLASSICAL,
    CHSH_QUANTUM,
    MERMIN_CLASSICAL,
    MERMIN_PARAM_NAMES,
    MERMIN_QUANTUM,
    Classification,
    bell_value,
    classify,
    mermin_value,
)
from .weyl import as_amplitude

log = logging.getLogger(__name__)

KINDS = {
    "bell": dict(
        names=BELL_PARAM_NAMES,
        amplitudes=("z", "z_prime", "w", "w_prime"),
        state=("eta", "sigma"),
        value=bell_value,
        bounds=(CHSH_CLASSICAL, CHSH_QUANTUM),
    ),
    "mermin": dict(
        names=MERMIN_PARAM_NAMES,
        amplitudes=("z", "z_prime", "w", "w_prime", "zeta", "zeta_prime"),
        state=("eta", "sigma", "tau"),
        value=mermin_value,
        bounds=(MERMIN_CLASSICAL, MERMIN_QUANTUM),
    ),
}

BOUND_SLACK = 1e-6


def _kind(kind: str) -> dict:
    try:
        return KINDS[kind]
    except KeyError:
        raise ValueError(f"kind must be 'bell' or 'mermin', got {kind!r}") from None


def param_names(kind: str) -> tuple[str, ...]:
    return _kind(kind)["names"]


def evaluate(kind: str, params):
    """Correlator combination for one or many full parameter vectors."""
    return _kind(kind)["value"](params)


def quantum_bound(kind: str) -> float:
    return _kind(kind)["bounds"][1]


def amplitude_vector(kind: str, amplitudes: dict) -> list[float]:
    """Flatten named amplitudes into ``[re, im, re, im, ...]`` in canonical order."""
    out = []
    for name in _kind(kind)["amplitudes"]:
        a = as_amplitude(amplitudes.get(name, 0.0))
        out += [a.re, a.im]
    return out


def full_vector(kind: str, amplitudes: dict, state: dict) -> np.ndarray:
    spec = _kind(kind)
    return np.array(amplitude_vector(kind, amplitudes) + [float(state[k]) for k in spec["state"]])


# -- scans -------------------------------------------------------------------


def _axis(r):
    lo, hi, n = r
    lo, hi, n = float(lo), float(hi), int(n)
    if n < 1:
        raise ValueError("grid count must be >= 1")
    if n == 1:
        if lo != hi:
            raise ValueError("a single-point axis needs lo == hi")
    elif not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class ScanSpec:
    """Grid over ``(eta, sigma)`` with all other parameters held fixed.

    ``eta_range`` and ``sigma_range`` are ``(lo, hi, count)``; a count of 1
    with ``lo == hi`` gives a single node.
    """

    eta_range: tuple
    sigma_range: tuple
    fixed_amplitudes: dict = field(default_factory=dict)
    fixed_tau: float | None = None

    def __post_init__(self):
        _axis(self.eta_range)
        _axis(self.sigma_range)
        tau = self.fixed_tau or 0.0
        if float(self.eta_range[0]) == 0.0 and float(self.sigma_range[0]) == 0.0 and tau == 0.0:
            raise ValueError("scan grid includes the degenerate origin eta = sigma = 0")

    @property
    def etas(self) -> np.ndarray:
        return _axis(self.eta_range)

    @property
    def sigmas(self) -> np.ndarray:
        return _axis(self.sigma_range)


@dataclass(frozen=True, eq=False)
class ScanResult:
    kind: str
    etas: np.ndarray
    sigmas: np.ndarray
    values: np.ndarray  # (n_eta, n_sigma); NaN marks degenerate cells
    classification: np.ndarray  # same shape, Classification or None
    argmax: tuple[float, float]
    max: float

    @property
    def violated(self) -> np.ndarray:
        return np.array(
            [[c is not None and c != Classification.CLASSICAL for c in row] for row in self.classification],
            dtype=bool,
        )

    def rows(self):
        """``(eta, sigma, value, violated)`` tuples, eta-major."""
        viol = self.violated
        for i, e in enumerate(self.etas):
            for j, s in enumerate(self.sigmas):
                yield float(e), float(s), float(self.values[i, j]), bool(viol[i, j])


def _chunks(n, k):
    k = max(1, min(k, n))
    edges = np.linspace(0, n, k + 1).astype(int)
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def scan(spec: ScanSpec, kind: str, *, threads: int = 1) -> ScanResult:
    """Evaluate the correlator over the ``(eta, sigma)`` grid of ``spec``."""
    meta = _kind(kind)
    etas, sigmas = spec.etas, spec.sigmas
    amps = amplitude_vector(kind, spec.fixed_amplitudes)
    if kind == "mermin" and spec.fixed_tau is None:
        raise ValueError("mermin scans need fixed_tau")

    E, S = np.meshgrid(etas, sigmas, indexing="ij")
    cols = [np.broadcast_to(a, E.shape) for a in amps] + [E, S]
    if kind == "mermin":
        cols.append(np.full(E.shape, float(spec.fixed_tau)))
    grid = np.stack(cols, axis=-1)

    values = np.empty(E.shape)

    def work(rows):
        a, b = rows
        values[a:b] = meta["value"](grid[a:b])

    parts = _chunks(len(etas), threads)
    if len(parts) > 1:
        with ThreadPoolExecutor(max_workers=len(parts)) as ex:
            list(ex.map(work, parts))
    else:
        work(parts[0])

    cb, qb = meta["bounds"]
    classes = np.empty(values.shape, dtype=object)
    for idx, v in np.ndenumerate(values):
        classes[idx] = None if math.isnan(v) else classify(v, cb, qb)

    if np.all(np.isnan(values)):
        best, arg = float("nan"), (float("nan"), float("nan"))
    else:
        i, j = np.unravel_index(np.nanargmax(values), values.shape)
        best, arg = float(values[i, j]), (float(etas[i]), float(sigmas[j]))
    return ScanResult(kind, etas, sigmas, values, classes, arg, best)


# -- maximization ------------------------------------------------------------

MAX_EVALS = 20_000
SIMPLEX_TOL = 1e-10
DEFAULT_STARTS = 64


def default_bounds(kind: str) -> list[tuple[float, float]]:
    """|Re| <= 0.1, |Im| <= 1 for every amplitude; state parameters in [0.05, 60]."""
    meta = _kind(kind)
    b = [(-0.1, 0.1), (-1.0, 1.0)] * len(meta["amplitudes"])
    return b + [(0.05, 60.0)] * len(meta["state"])


def resolve_bounds(kind: str, bounds=None) -> list[tuple[float, float]]:
    """Accept a full list of pairs, or a dict of overrides keyed by parameter name."""
    names = param_names(kind)
    if bounds is None:
        out = default_bounds(kind)
    elif isinstance(bounds, dict):
        out = default_bounds(kind)
        for k, v in bounds.items():
            if k not in names:
                raise ValueError(f"unknown parameter {k!r}; expected one of {names}")
            out[names.index(k)] = tuple(v)
    else:
        out = [tuple(b) for b in bounds]
    if len(out) != len(names):
        raise ValueError(f"need {len(names)} bounds, got {len(out)}")
    for (lo, hi), n in zip(out, names):
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ValueError(f"bad bounds for {n}: ({lo}, {hi})")
    return [(float(lo), float(hi)) for lo, hi in out]


def freeze_amplitudes(kind: str, amplitudes: dict | None = None, bounds=None):
    """Bounds with every amplitude pinned (to ``amplitudes`` or 0); state parameters free."""
    out = resolve_bounds(kind, bounds)
    vec = amplitude_vector(kind, amplitudes or {})
    for k, v in enumerate(vec):
        out[k] = (v, v)
    return out


@dataclass(frozen=True, eq=False)
class OptimResult:
    kind: str
    best_value: float
    best_params: np.ndarray
    n_evaluations: int
    seed: int
    converged: bool
    best_start: int = 0

    @property
    def param_names(self) -> tuple[str, ...]:
        return param_names(self.kind)

    def params_dict(self) -> dict[str, float]:
        return {n: float(v) for n, v in zip(self.param_names, self.best_params)}


def _run_start(kind, x_start, free, lo, hi, fixed_vec, max_evals, tol):
    value_fn = _kind(kind)["value"]
    full = fixed_vec.copy()

    def neg(xf):
        full[free] = xf
        v = value_fn(full)
        return math.inf if math.isnan(v) else -v

    x0 = np.clip(x_start[free], lo, hi)
    width = hi - lo
    simplex = [x0]
    for k in range(len(x0)):
        p = x0.copy()
        step = 0.05 * width[k]
        # step inward so the initial simplex stays feasible
        p[k] = p[k] + step if p[k] + step <= hi[k] else p[k] - step
        simplex.append(p)
    res = minimize(
        neg,
        x0,
        method="Nelder-Mead",
        bounds=list(zip(lo, hi)),
        options=dict(
            initial_simplex=np.array(simplex),
            xatol=tol,
            fatol=tol,
            maxfev=max_evals,
            adaptive=len(x0) > 4,
        ),
    )
    x = fixed_vec.copy()
    x[free] = np.clip(res.x, lo, hi)
    return float(value_fn(x)), x, int(res.nfev), bool(res.success)


def maximize(
    kind: str,
    bounds=None,
    starts: int = DEFAULT_STARTS,
    rng_seed: int = 0,
    *,
    x0=None,
    max_evals: int = MAX_EVALS,
    tol: float = SIMPLEX_TOL,
    threads: int = 1,
) -> OptimResult:
    """Multi-start Nelder-Mead ascent of the Bell or Mermin correlator.

    Parameters
    ----------
    kind : {"bell", "mermin"}
    bounds : list of (lo, hi) or dict, optional
        Box for the full parameter vector (see :func:`param_names`). A
        parameter with ``lo == hi`` is held fixed. Defaults to
        :func:`default_bounds`.
    starts : int
        Number of simplex runs. Start points come from a scrambled Halton
        sequence seeded by ``rng_seed``; if ``x0`` is given it is used as
        start 0 and the remaining ``starts - 1`` come from the sequence.
    threads : int
        Worker threads. Results do not depend on it.

    Returns
    -------
    OptimResult
        Best over all starts; ties go to the lowest start index.
        ``converged`` reports the winning start's termination status.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    b = resolve_bounds(kind, bounds)
    lo_all = np.array([p[0] for p in b])
    hi_all = np.array([p[1] for p in b])
    free = np.flatnonzero(hi_all > lo_all)
    fixed_vec = lo_all.copy()
    qbound = quantum_bound(kind)

    points = []
    if x0 is not None:
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != lo_all.shape:
            raise ValueError(f"x0 must have {len(lo_all)} entries")
        points.append(np.where(hi_all > lo_all, x0, lo_all))
    n_sampled = starts - len(points)
    if n_sampled > 0:
        if len(free):
            sampler = qmc.Halton(d=len(free), scramble=True, seed=rng_seed)
            unit = sampler.random(n_sampled)
        else:
            unit = np.zeros((n_sampled, 0))
        for u in unit:
            p = lo_all.copy()
            p[free] = lo_all[free] + u * (hi_all[free] - lo_all[free])
            points.append(p)

    if len(free) == 0:
        v = float(evaluate(kind, fixed_vec))
        return OptimResult(kind, v, fixed_vec, 1, rng_seed, True)

    lo, hi = lo_all[free], hi_all[free]

    def one(p):
        return _run_start(kind, p, free, lo, hi, fixed_vec, max_evals, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(one, points))
    else:
        results = [one(p) for p in points]

    best_idx = 0
    for k, r in enumerate(results):
        if r[0] > results[best_idx][0]:
            best_idx = k
    value, x, _, ok = results[best_idx]
    n_eval = sum(r[2] for r in results)
    log.debug("maximize %s: best %.12g from start %d of %d", kind, value, best_idx, len(results))

    if value > qbound + BOUND_SLACK:
        raise RuntimeError(
            f"optimizer reported {value!r} above the quantum bound {qbound}; "
            f"parameters {x.tolist()}"
        )
    return OptimResult(kind, value, x, n_eval, rng_seed, ok, best_idx)
