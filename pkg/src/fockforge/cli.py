"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
Divergent partition functions are ordinary output rows.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oneparticle, thermo, verify

COLUMNS = {
    "spectrum": ["k", "eigenvalue"],
    "multiplicities": ["m", "nu"],
    "partition": ["beta", "q", "status", "value", "truncated", "tail_bound"],
    "beta-max": ["n", "beta_n", "x_root", "residual"],
    "verify": ["suite", "status", "max_defect", "detail"],
}
# printed in scientific notation; everything else uses 12 significant digits
SCIENTIFIC = {"q", "residual", "tail_bound", "max_defect"}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int | None = None
    weights: tuple = ()
    betas: tuple = ()
    d: int | None = None
    N: int | None = None
    m_max: int = 200
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    suites: tuple = ()


def _fmt(column, value):
    if value is None:
        return ""
    if isinstance(value, (bool, str)) or (isinstance(value, int) and not isinstance(value, bool)):
        return str(value)
    if column in SCIENTIFIC:
        return f"{value:.11e}"
    return f"{value:.12g}"


def _json_value(column, value):
    if value is None or isinstance(value, (str, bool, int)):
        return value
    return float(_fmt(column, value))


def parse_weights(text):
    """``"1..8"``, ``"1,3,5"`` or ``"4"``."""
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty weight range {text!r}")
        return tuple(range(lo, hi + 1))
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse weights {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fockforge",
        description="Truncated Fock space checks and maximal-temperature thermodynamics.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("spectrum", help="rotation eigenvalues of the lowest-weight module")
    p.add_argument("--weight", "-n", type=int, required=True)
    p.add_argument("--d", type=int, default=10, help="basis truncation")
    common(p)

    p = sub.add_parser("multiplicities", help="eigenvalue multiplicities of the conformal Hamiltonian")
    p.add_argument("--weight", "-n", type=int, required=True)
    p.add_argument("--m-max", type=int, default=20)
    common(p)

    p = sub.add_parser("partition", help="Tr exp(-beta L) in closed form and truncated")
    p.add_argument("--weight", "-n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=float)
    group.add_argument("--beta-range", nargs=3, metavar=("START", "STOP", "STEPS"))
    p.add_argument("--m-max", type=int, default=200)
    common(p)

    p = sub.add_parser("beta-max", help="inverse maximal temperature beta_n")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--weight", "-n", type=int)
    group.add_argument("--weights", type=parse_weights, help="range like 1..8 or list 1,2,5")
    common(p)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append", choices=sorted(verify.SUITES), help="repeatable")
    p.add_argument("--d", type=int)
    p.add_argument("--N", type=int)
    common(p)
    return parser


def config_from_args(parser, args):
    """Validate parsed flags; configuration errors go through ``parser.error`` (exit 2)."""
    cmd = args.subcommand
    kw = {"subcommand": cmd, "fmt": args.fmt, "out": args.out}
    if cmd in ("spectrum", "multiplicities", "partition") or (cmd == "beta-max" and args.weight is not None):
        if args.weight < 1:
            parser.error(f"--weight must be >= 1, got {args.weight}")
        kw["n"] = args.weight
    if cmd == "beta-max":
        weights = (args.weight,) if args.weight is not None else args.weights
        if any(w < 1 for w in weights):
            parser.error("weights must be >= 1")
        kw["weights"] = weights
    if cmd == "spectrum":
        if args.d < 1:
            parser.error("--d must be >= 1")
        kw["d"] = args.d
    if cmd in ("multiplicities", "partition"):
        if args.m_max < 0:
            parser.error("--m-max must be >= 0")
        kw["m_max"] = args.m_max
    if cmd == "partition":
        if args.beta is not None:
            if not args.beta > 0:
                parser.error(f"--beta must be positive, got {args.beta}")
            kw["betas"] = (args.beta,)
        else:
            try:
                start, stop = float(args.beta_range[0]), float(args.beta_range[1])
                steps = int(args.beta_range[2])
            except ValueError:
                parser.error("--beta-range expects START STOP STEPS (float float int)")
            if not 0 < start < stop or steps < 2:
                parser.error("--beta-range needs 0 < START < STOP and STEPS >= 2")
            kw["betas"] = tuple(float(b) for b in np.linspace(start, stop, steps))
    if cmd == "verify":
        for flag in ("d", "N"):
            value = getattr(args, flag)
            if value is not None and value < 1:
                parser.error(f"--{flag} must be >= 1")
        if args.N is not None and args.N < 2 and (not args.suite or "commutation" in args.suite):
            parser.error("--N must be >= 2 for the commutation suite")
        kw.update(seed=args.seed, suites=tuple(args.suite or ()), d=args.d, N=args.N)
    return RunConfig(**kw)


# --------------------------------------------------------------------------
# Row producers
# --------------------------------------------------------------------------


def rows_spectrum(cfg):
    values = oneparticle.rotation_spectrum(oneparticle.LowestWeightIrrep(cfg.n, cfg.d))
    return [{"k": k, "eigenvalue": float(v)} for k, v in enumerate(values)]


def rows_multiplicities(cfg):
    table = thermo.multiplicities(cfg.n, cfg.m_max)
    return [{"m": m, "nu": nu} for m, nu in enumerate(table.nu)]


def partition_row(n, beta, m_max):
    closed = thermo.partition_closed(n, beta)
    trunc = thermo.partition_truncated(n, beta, m_max)
    return {
        "beta": beta,
        "q": closed.q,
        "status": closed.status,
        "value": closed.value,
        "truncated": trunc.value,
        "tail_bound": trunc.tail_bound,
    }


def rows_partition(cfg):
    # grid points are independent; map() keeps input order
    with ThreadPoolExecutor(max_workers=min(4, len(cfg.betas))) as pool:
        return list(pool.map(lambda b: partition_row(cfg.n, b, cfg.m_max), cfg.betas))


def rows_beta_max(cfg):
    rows = []
    for n in cfg.weights:
        root = thermo.solve_beta_max(n)
        rows.append({"n": n, "beta_n": root.beta, "x_root": root.x, "residual": root.residual})
    return rows


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def render(cfg, rows, extra=None):
    columns = COLUMNS[cfg.subcommand]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(c, row[c]) for c in columns])
        return buf.getvalue()
    doc = {
        "command": cfg.subcommand,
        "columns": columns,
        "rows": [{c: _json_value(c, row[c]) for c in columns} for row in rows],
    }
    if cfg.n is not None:
        doc["n"] = cfg.n
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(cfg):
    emit(cfg, render(cfg, rows_spectrum(cfg)))
    return 0


def cmd_multiplicities(cfg):
    emit(cfg, render(cfg, rows_multiplicities(cfg)))
    return 0


def cmd_partition(cfg):
    emit(cfg, render(cfg, rows_partition(cfg), {"annotation": thermo.split_annotation(cfg.n)}))
    return 0


def cmd_beta_max(cfg):
    emit(cfg, render(cfg, rows_beta_max(cfg)))
    return 0


def cmd_verify(cfg):
    results = verify.run_suites(cfg.suites, seed=cfg.seed, d=cfg.d, N=cfg.N)
    rows = [
        {
            "suite": r.name,
            "status": "pass" if r.passed else "FAIL",
            "max_defect": float(r.max_defect),
            "detail": r.detail,
        }
        for r in results
    ]
    emit(cfg, render(cfg, rows, {"seed": cfg.seed}))
    failed = [r for r in results if not r.passed]
    for r in failed:
        dump = {"suite": r.name, "operators": {k: op.to_dict() for k, op in r.dumps.items()}}
        sys.stderr.write(json.dumps(dump) + "\n")
    return 1 if failed else 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "multiplicities": cmd_multiplicities,
    "partition": cmd_partition,
    "beta-max": cmd_beta_max,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(parser, args)
    return COMMANDS[cfg.subcommand](cfg)


if __name__ == "__main__":
    sys.exit(main())
