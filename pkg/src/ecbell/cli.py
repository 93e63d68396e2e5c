"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 bad config or arguments,
3 degenerate state, 4 output not writable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from datetime import datetime, timezone

from . import config as cfgmod
from .config import ConfigError, RunConfig
from .correlators import CorrelatorValue, classify
from .optimize import (
    KINDS,
    ScanSpec,
    evaluate,
    freeze_amplitudes,
    full_vector,
    maximize,
    param_names,
    resolve_bounds,
    scan,
)
from .states import DegenerateState, make_bipartite, make_tripartite
from .verify import run_oracle_suite

log = logging.getLogger("ecbell")

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3, 4


class OutputError(OSError):
    pass


def _write(path, text):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _emit(text, out):
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return "" if x != x else f"{x:.12g}"


def _load_config(args) -> RunConfig:
    if args.preset:
        cfg = cfgmod.preset(args.preset)
    elif args.config:
        try:
            cfg = cfgmod.load(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    elif args.kind:
        cfg = cfgmod.zero_config(args.kind)
    else:
        raise ConfigError("one of --preset, --config or --kind is required")
    if args.all_zero:
        cfg.amplitudes = {k: cfgmod.ComplexAmplitude(0.0, 0.0) for k in cfg.amplitudes}
    for item in args.amp or ():
        name, sep, literal = item.partition("=")
        if not sep or name not in cfg.amplitudes:
            raise ConfigError(
                f"--amp expects NAME=VALUE with NAME in {sorted(cfg.amplitudes)}, got {item!r}"
            )
        cfg.amplitudes[name] = cfgmod.parse_complex(literal)
    for name in ("eta", "sigma", "tau"):
        v = getattr(args, name, None)
        if v is not None:
            if name not in cfg.state:
                raise ConfigError(f"--{name} does not apply to kind {cfg.kind}")
            cfg.state[name] = v
    if args.seed is not None:
        cfg.rng_seed = args.seed
    return cfg


def _state(cfg: RunConfig):
    # raises DegenerateState early, before any work
    if cfg.kind == "bell":
        return make_bipartite(cfg.state["eta"], cfg.state["sigma"])
    return make_tripartite(cfg.state["eta"], cfg.state["sigma"], cfg.state["tau"])


def _record(kind, value, params, seed, n_eval, **extra) -> str:
    cb, qb = KINDS[kind]["bounds"]
    rec = {
        "kind": kind,
        "value": value,
        "classification": classify(value, cb, qb).value,
        "params": params,
        "seed": seed,
        "n_evaluations": n_eval,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        **extra,
    }
    return json.dumps(rec, indent=2, sort_keys=True) + "\n"


# -- subcommands -------------------------------------------------------------


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    _state(cfg)
    vec = full_vector(cfg.kind, cfg.amplitudes, cfg.state)
    cb, qb = KINDS[cfg.kind]["bounds"]
    res = CorrelatorValue.from_value(evaluate(cfg.kind, vec), cb, qb)
    print(f"kind:           {cfg.kind}")
    print(f"value:          {res.value:.12g}")
    print(f"classification: {res.classification.value}")
    print(f"bounds:         classical {cb:g}, quantum {qb:.12g}")
    params = dict(zip(param_names(cfg.kind), map(float, vec)))
    text = _record(cfg.kind, res.value, params, cfg.rng_seed, 1)
    out = args.out or cfg.output_path
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def scan_csv(result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eta", "sigma", "value", "violated"])
    for e, s, v, viol in result.rows():
        w.writerow([_fmt(e), _fmt(s), _fmt(v), int(viol)])
    return buf.getvalue()


def cmd_scan(args) -> int:
    cfg = _load_config(args)
    block = cfg.scan or cfgmod.zero_config(cfg.kind).scan
    eta_r = tuple(args.eta_range) if args.eta_range else block.eta
    sig_r = tuple(args.sigma_range) if args.sigma_range else block.sigma
    try:
        spec = ScanSpec(
            (eta_r[0], eta_r[1], int(eta_r[2])),
            (sig_r[0], sig_r[1], int(sig_r[2])),
            cfg.amplitudes,
            cfg.state.get("tau"),
        )
    except ValueError as exc:
        raise ConfigError(f"scan: {exc}") from None
    res = scan(spec, cfg.kind, threads=args.threads)
    out = args.out or cfg.output_path
    _emit(scan_csv(res), out)
    n_viol = int(res.violated.sum())
    summary = (
        f"max {_fmt(res.max)} at eta={_fmt(res.argmax[0])} sigma={_fmt(res.argmax[1])}; "
        f"{n_viol} of {res.values.size} cells violate"
    )
    print(summary, file=sys.stdout if out else sys.stderr)
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _load_config(args)
    block = cfg.optimize or cfgmod.OptimizeBlock()
    starts = args.starts if args.starts is not None else block.starts
    warm = args.warm_start or block.warm_start
    frozen = args.freeze_amplitudes or block.freeze_amplitudes
    max_evals = args.max_evals if args.max_evals is not None else block.max_evals

    try:
        bounds = resolve_bounds(cfg.kind, block.bounds or None)
        if frozen:
            bounds = freeze_amplitudes(cfg.kind, cfg.amplitudes, bounds)
    except ValueError as exc:
        raise ConfigError(f"optimize: {exc}") from None
    x0 = None
    if warm:
        _state(cfg)
        x0 = full_vector(cfg.kind, cfg.amplitudes, cfg.state)
    res = maximize(
        cfg.kind, bounds, starts, cfg.rng_seed, x0=x0, max_evals=max_evals, threads=args.threads
    )
    print(
        f"best {res.best_value:.12g} from start {res.best_start} of {starts} "
        f"({res.n_evaluations} evaluations, converged={res.converged})",
        file=sys.stderr,
    )
    text = _record(
        cfg.kind,
        res.best_value,
        res.params_dict(),
        res.seed,
        res.n_evaluations,
        converged=res.converged,
        starts=starts,
    )
    _emit(text, args.out or cfg.output_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.dim < 16:
        log.warning("dim %d is below the recommended minimum of 16", args.dim)
    report = run_oracle_suite(args.dim, args.cases, args.seed, eta=args.eta, sigma=args.sigma, tau=args.tau)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_VERIFY


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecbell", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--preset", choices=["bell-paper", "mermin-paper"])
        src.add_argument("--config", metavar="PATH", help="JSON run configuration")
        src.add_argument("--kind", choices=["bell", "mermin"], help="all amplitudes zero")
        sp.add_argument("--all-zero", action="store_true", help="set every amplitude to zero")
        sp.add_argument("--amp", action="append", metavar="NAME=VALUE", help="override one amplitude, e.g. z=0.01+0.12i")
        sp.add_argument("--eta", type=float)
        sp.add_argument("--sigma", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int, default=1, help="speed only; never changes results")

    sp = sub.add_parser("eval", help="evaluate the correlator once")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("scan", help="grid over (eta, sigma), CSV output")
    common(sp)
    sp.add_argument("--eta-range", nargs=3, type=float, metavar=("LO", "HI", "N"))
    sp.add_argument("--sigma-range", nargs=3, type=float, metavar=("LO", "HI", "N"))
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("optimize", help="multi-start Nelder-Mead maximization")
    common(sp)
    sp.add_argument("--starts", type=int)
    sp.add_argument("--warm-start", action="store_true", help="use the configured point as start 0")
    sp.add_argument("--freeze-amplitudes", action="store_true")
    sp.add_argument("--max-evals", type=int)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("verify", help="cross-check closed forms against the Fock oracle")
    sp.add_argument("--dim", type=int, default=40)
    sp.add_argument("--cases", type=int, default=50)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--eta", type=float, help="pin eta instead of drawing it")
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--tau", type=float)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
