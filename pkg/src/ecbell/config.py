"""Run configuration: JSON files, complex literals, and the built-in presets."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from . import presets
from .weyl import ComplexAmplitude

AMPLITUDE_NAMES = {
    "bell": ("z", "z_prime", "w", "w_prime"),
    "mermin": ("z", "z_prime", "w", "w_prime", "zeta", "zeta_prime"),
}
STATE_NAMES = {"bell": ("eta", "sigma"), "mermin": ("eta", "sigma", "tau")}


class ConfigError(ValueError):
    pass


_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _fail(text, pos, why):
    raise ConfigError(
        f"malformed complex literal {text!r} at position {pos}: {why}\n  {text}\n  {' ' * pos}^"
    )


def parse_complex(text: str) -> ComplexAmplitude:
    """Parse ``"x+yi"``-style literals: ``"1.5"``, ``"-2i"``, ``"0.01-0.6i"``, ``"i"``.

    ``j`` is accepted in place of ``i``.
    """
    n = len(text)
    pos = 0
    terms = []  # (value, is_imag, start)

    def skip(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    pos = skip(pos)
    if pos == n:
        _fail(text, pos, "empty literal")
    while pos < n:
        start = pos
        sign = 1.0
        if text[pos] in "+-":
            sign = -1.0 if text[pos] == "-" else 1.0
            pos = skip(pos + 1)
        elif terms:
            _fail(text, pos, "expected '+' or '-' between terms")
        m = _NUMBER.match(text, pos)
        mag = None
        if m:
            mag = float(m.group())
            pos = m.end()
        if pos < n and text[pos] in "ij":
            terms.append((sign * (1.0 if mag is None else mag), True, start))
            pos += 1
        elif mag is None:
            _fail(text, pos, "expected a number")
        else:
            terms.append((sign * mag, False, start))
        pos = skip(pos)

    if len(terms) > 2:
        _fail(text, terms[2][2], "too many terms")
    if len(terms) == 2:
        (a, a_imag, _), (b, b_imag, bstart) = terms
        if a_imag or not b_imag:
            _fail(text, bstart, "expected a real part followed by an imaginary part")
        return ComplexAmplitude(a, b)
    value, imag, _ = terms[0]
    return ComplexAmplitude(0.0, value) if imag else ComplexAmplitude(value, 0.0)


def parse_amplitude(value, where="amplitude") -> ComplexAmplitude:
    """Accept ``"x+yi"`` strings, ``[x, y]`` pairs, or plain real numbers."""
    if isinstance(value, str):
        return parse_complex(value)
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a complex value, got {value!r}")
    if isinstance(value, (int, float)):
        return ComplexAmplitude(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        try:
            return ComplexAmplitude(float(value[0]), float(value[1]))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: expected 'x+yi' or [x, y], got {value!r}")


def format_complex(a: ComplexAmplitude) -> str:
    # repr keeps the shortest round-tripping decimal form
    sign = "-" if math.copysign(1.0, a.im) < 0 else "+"
    return f"{a.re!r}{sign}{abs(a.im)!r}i"


@dataclass
class ScanBlock:
    eta: tuple[float, float, int]
    sigma: tuple[float, float, int]


@dataclass
class OptimizeBlock:
    starts: int = 64
    warm_start: bool = False
    freeze_amplitudes: bool = False
    max_evals: int = 20_000
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)


@dataclass
class RunConfig:
    kind: str
    amplitudes: dict[str, ComplexAmplitude]
    state: dict[str, float]
    scan: ScanBlock | None = None
    optimize: OptimizeBlock | None = None
    output_path: str | None = None
    rng_seed: int = 0

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "amplitudes": {k: format_complex(v) for k, v in self.amplitudes.items()},
            "state": dict(self.state),
            "rng_seed": self.rng_seed,
        }
        if self.scan is not None:
            d["scan"] = {"eta": list(self.scan.eta), "sigma": list(self.scan.sigma)}
        if self.optimize is not None:
            o = self.optimize
            d["optimize"] = {
                "starts": o.starts,
                "warm_start": o.warm_start,
                "freeze_amplitudes": o.freeze_amplitudes,
                "max_evals": o.max_evals,
                "bounds": {k: list(v) for k, v in o.bounds.items()},
            }
        if self.output_path is not None:
            d["output_path"] = self.output_path
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _range(v, where):
    if not (isinstance(v, (list, tuple)) and len(v) == 3):
        raise ConfigError(f"{where}: expected [lo, hi, count], got {v!r}")
    lo, hi, n = v
    if isinstance(n, float) and n.is_integer():
        n = int(n)
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(f"{where}: count must be an integer, got {n!r}")
    return (float(lo), float(hi), n)


def from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    known = {"kind", "amplitudes", "state", "scan", "optimize", "output_path", "rng_seed"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    kind = d.get("kind")
    if kind not in AMPLITUDE_NAMES:
        raise ConfigError(f"kind must be 'bell' or 'mermin', got {kind!r}")

    amps_in = d.get("amplitudes", {})
    bad = set(amps_in) - set(AMPLITUDE_NAMES[kind])
    if bad:
        raise ConfigError(f"unknown amplitudes for {kind}: {sorted(bad)}")
    amplitudes = {
        name: parse_amplitude(amps_in.get(name, 0.0), f"amplitudes.{name}")
        for name in AMPLITUDE_NAMES[kind]
    }

    state_in = d.get("state", {})
    bad = set(state_in) - set(STATE_NAMES[kind])
    if bad:
        raise ConfigError(f"unknown state parameters for {kind}: {sorted(bad)}")
    state = {}
    for name in STATE_NAMES[kind]:
        if name not in state_in:
            raise ConfigError(f"state.{name} is required for kind {kind}")
        try:
            state[name] = float(state_in[name])
        except (TypeError, ValueError):
            raise ConfigError(f"state.{name}: expected a number, got {state_in[name]!r}") from None

    scan = None
    if "scan" in d:
        s = d["scan"]
        scan = ScanBlock(_range(s.get("eta"), "scan.eta"), _range(s.get("sigma"), "scan.sigma"))

    opt = None
    if "optimize" in d:
        o = dict(d["optimize"])
        bounds = {k: (float(v[0]), float(v[1])) for k, v in o.pop("bounds", {}).items()}
        try:
            opt = OptimizeBlock(**o, bounds=bounds)
        except TypeError as exc:
            raise ConfigError(f"optimize: {exc}") from None

    seed = d.get("rng_seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"rng_seed must be an integer, got {seed!r}")
    return RunConfig(kind, amplitudes, state, scan, opt, d.get("output_path"), seed)


def loads(text: str) -> RunConfig:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(d)


def load(path) -> RunConfig:
    with open(path) as fh:
        return loads(fh.read())


def preset(name: str) -> RunConfig:
    if name == "bell-paper":
        return RunConfig(
            "bell",
            dict(presets.BELL_AMPLITUDES),
            dict(presets.BELL_STATE),
            ScanBlock(presets.BELL_SCAN["eta"], presets.BELL_SCAN["sigma"]),
            OptimizeBlock(starts=64),
        )
    if name == "mermin-paper":
        return RunConfig(
            "mermin",
            dict(presets.MERMIN_AMPLITUDES),
            dict(presets.MERMIN_STATE),
            ScanBlock(presets.MERMIN_SCAN["eta"], presets.MERMIN_SCAN["sigma"]),
            OptimizeBlock(starts=1, warm_start=True),
        )
    raise ConfigError(f"unknown preset {name!r}; choose from {sorted(presets.PRESETS)}")


def zero_config(kind: str, state: dict | None = None) -> RunConfig:
    """All amplitudes zero; state parameters default to 1."""
    if kind not in AMPLITUDE_NAMES:
        raise ConfigError(f"kind must be 'bell' or 'mermin', got {kind!r}")
    st = {k: 1.0 for k in STATE_NAMES[kind]}
    st.update(state or {})
    return RunConfig(
        kind,
        {k: ComplexAmplitude(0.0, 0.0) for k in AMPLITUDE_NAMES[kind]},
        st,
        ScanBlock((0.05, 60.0, 240), (0.05, 60.0, 240)),
        OptimizeBlock(),
    )
