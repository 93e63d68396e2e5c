"""Randomized cross-checks of the closed forms against the Fock-space oracle."""
from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field

import numpy as np

from . import fock, weyl
from .correlators import correlator2, correlator3
from .states import DegenerateState, make_bipartite, make_tripartite

log = logging.getLogger(__name__)

TOLERANCES = {
    "closed_form_2": 1e-6,
    "closed_form_3": 1e-6,
    "reality": 1e-7,
    "unitarity": 1e-8,
    "weyl_law": 1e-7,
    "sandwich": 1e-7,
    "hermitian_decomposition": 1e-7,
    "commutation": 1e-12,
    "exchange_phase": 1e-7,
}


@dataclass
class Check:
    tol: float
    worst: float = 0.0
    worst_draw: dict | None = None

    @property
    def passed(self) -> bool:
        return self.worst < self.tol

    def update(self, err: float, draw: dict):
        if err >= self.worst or self.worst_draw is None:
            self.worst = max(self.worst, float(err))
            self.worst_draw = draw


@dataclass
class VerifyReport:
    dim: int
    cases: int
    seed: int
    checks: dict[str, Check] = field(default_factory=dict)
    errors: list[tuple[dict, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        out = [f"oracle suite: dim={self.dim} cases={self.cases} seed={self.seed}"]
        if self.cases == 0:
            out.append("WARNING: 0 cases requested; nothing was checked")
        for name, c in self.checks.items():
            status = "PASS" if c.passed else "FAIL"
            out.append(f"  {status} {name:<24} worst={c.worst:.3e} tol={c.tol:.0e}")
            if not c.passed:
                out.append(f"       failing draw: {c.worst_draw}")
        for draw, msg in self.errors:
            out.append(f"  ERROR {msg}")
            out.append(f"       draw: {draw}")
        out.append("result: " + ("ok" if self.ok else "FAILED"))
        return out


def _disk(rng, radius=1.0) -> complex:
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def draw_case(rng, dim, *, eta=None, sigma=None, tau=None) -> dict:
    """One random parameter draw, shrunk (unless pinned) to fit truncation ``dim``.

    State parameters come from [0.1, 1.5], amplitudes from the unit disk.
    """
    pinned = {"eta": eta, "sigma": sigma, "tau": tau}
    params = {k: (v if v is not None else rng.uniform(0.1, 1.5)) for k, v in pinned.items()}
    amps = {k: _disk(rng) for k in ("z", "z_prime", "w", "zeta")}

    def reach(p, a):
        return max(
            abs(a["z"]) + abs(p["eta"]),
            abs(a["w"]) + abs(p["sigma"]),
            abs(a["zeta"]) + abs(p["tau"]),
        )

    r = reach(params, amps)
    r_max = fock.max_displacement(dim)
    if r > r_max and r_max > 0:
        f = r_max / r
        amps = {k: v * f for k, v in amps.items()}
        params = {k: (v if pinned[k] is not None else v * f) for k, v in params.items()}
    return {**{k: float(v) for k, v in params.items()}, **amps}


def _check_case(d: dict, dim: int, checks: dict[str, Check]):
    z, zp, w, zeta = d["z"], d["z_prime"], d["w"], d["zeta"]
    st2 = make_bipartite(d["eta"], d["sigma"])
    st3 = make_tripartite(d["eta"], d["sigma"], d["tau"])

    o2 = fock.oracle_correlator((z, w), st2, dim)
    o3 = fock.oracle_correlator((z, w, zeta), st3, dim)
    checks["closed_form_2"].update(abs(o2.real - correlator2(z, w, st2)), d)
    checks["closed_form_3"].update(abs(o3.real - correlator3(z, w, zeta, st3)), d)
    checks["reality"].update(max(abs(o2.imag), abs(o3.imag)), d)

    Dz = fock.displacement_matrix(z, dim)
    eye = np.eye(dim)
    checks["unitarity"].update(np.abs(fock.half_block((Dz.dag() @ Dz).entries - eye)).max(), d)

    def label_matrix(lab):
        return lab.factor() * fock.displacement_product([complex(lab.amplitude)], dim).entries

    def product(*amps):
        return fock.displacement_product(amps, dim).entries

    prod = weyl.compose(weyl.label(z), weyl.label(zp))
    checks["weyl_law"].update(np.abs(fock.half_block(product(z, zp) - label_matrix(prod))).max(), d)

    eta = d["eta"]
    direct = {
        weyl.Sandwich.DAG_POS: product(-1j * eta, z, 1j * eta),
        weyl.Sandwich.POS_NEG: product(1j * eta, z, -1j * eta),
        weyl.Sandwich.POS_POS: product(1j * eta, z, 1j * eta),
    }
    err = max(
        np.abs(fock.half_block(m - label_matrix(weyl.conjugate_sandwich(z, eta, pat)))).max()
        for pat, m in direct.items()
    )
    checks["sandwich"].update(err, d)

    comm, circ = fock.hermitian_decomposition_check(z, dim)
    checks["hermitian_decomposition"].update(max(comm, circ), d)

    # operators on different modes commute; on the same mode they differ by
    # the phase exp(2i Im(z conj(z')))
    v = fock.build_state(st2, dim)
    Dw = fock.displacement_matrix(w, dim)
    ab = fock.apply_local([None, Dw], fock.apply_local([Dz, None], v))
    ba = fock.apply_local([Dz, None], fock.apply_local([None, Dw], v))
    checks["commutation"].update(abs(np.vdot(v.entries, ab.entries) - np.vdot(v.entries, ba.entries)), d)
    phase = cmath.exp(2j * weyl.weyl_phase(z, zp))
    same = np.abs(fock.half_block(product(z, zp) - phase * product(zp, z))).max()
    checks["exchange_phase"].update(same, d)


def run_oracle_suite(dim: int, cases: int, seed: int, *, eta=None, sigma=None, tau=None) -> VerifyReport:
    """Run every oracle check on ``cases`` random draws at truncation ``dim``."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(dim, cases, seed, {k: Check(t) for k, t in TOLERANCES.items()})
    for k in range(cases):
        d = draw_case(rng, dim, eta=eta, sigma=sigma, tau=tau)
        try:
            _check_case(d, dim, report.checks)
        except (fock.TruncationError, DegenerateState) as exc:
            report.errors.append((d, f"case {k}: {type(exc).__name__}: {exc}"))
    return report
