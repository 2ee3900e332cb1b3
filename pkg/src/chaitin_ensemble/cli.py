"""Command-line front end: ``chaitin-ensemble <subcommand> ...``.

Exit status: 0 success, 1 a ``verify`` check failed, 2 domain error
(including bad usage), 3 resource bound refused, 4 tolerance unreachable.
Errors print one line ``error: <Kind>: <reason>`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .codec import decode, encode, enumerate_programs
from .config import RunConfig, load_config
from .errors import DomainError, EnsembleError, ResourceBoundError
from .machine import Halted, InvalidWrite, MachineSpec, ProgramExhausted, StepLimitExceeded, run
from .machines import counting_machine_spec, expander_machine
from .numerics import Epsilon, slog2_of_inverse
from .partition import (
    A5_APPROX,
    ASYMPTOTIC,
    EXACT,
    HYBRID,
    asymptotic_deficit,
    k_of_eps,
    partition_exact,
)
from .prefix_codes import (
    code_from_name,
    decay_estimate,
    generation_stats,
    kraft_partial_sum,
    power_law_singularity_check,
    write_stats_csv,
)
from .thermo import ThermoConfig, thermo_point, write_thermo_csv

BUILTIN_MACHINES = {"counting": counting_machine_spec, "expander": expander_machine}


def fmt(x) -> str:
    """Shortest round-trip text for floats; str() for everything else."""
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _emit_json(doc, out) -> None:
    out.write(json.dumps(doc, sort_keys=False) + "\n")


def _emit_csv(header: Sequence[str], rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _emit_plain(pairs, out) -> None:
    for key, value in pairs:
        out.write(f"{key}={fmt(value)}\n")


# -- epsilon grids -------------------------------------------------------


def _parse_range(text: str) -> List[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise DomainError(f"range must be a:b or a:b:step, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise DomainError(f"range bounds must be integers, got {text!r}") from None
    if step <= 0 or b < a:
        raise DomainError(f"empty range {text!r}")
    return list(range(a, b + 1, step))


def _parse_eps(text: str) -> Epsilon:
    try:
        return Epsilon.literal(float(text))
    except ValueError:
        raise DomainError(f"--eps needs a decimal number, got {text!r}") from None


def eps_grid(args) -> List[Epsilon]:
    grid: List[Epsilon] = []
    for text in args.eps or []:
        grid.append(_parse_eps(text))
    for e in args.eps_pow2 or []:
        grid.append(Epsilon.dyadic(e))
    if args.eps_pow2_range:
        grid += [Epsilon.dyadic(e) for e in _parse_range(args.eps_pow2_range)]
    if not grid:
        raise DomainError("give --eps, --eps-pow2 or --eps-pow2-range")
    return grid


def _add_eps_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", action="append", metavar="X", help="eps = beta - ln 2 as a decimal (repeatable)")
    p.add_argument("--eps-pow2", action="append", type=int, metavar="E", help="eps = 2**-E (repeatable)")
    p.add_argument("--eps-pow2-range", metavar="A:B[:STEP]", help="eps = 2**-E for E = A..B inclusive")


def _map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


# -- partition -----------------------------------------------------------

PARTITION_COLUMNS = (
    "beta",
    "z_exact",
    "z_asymptotic",
    "one_minus_z_exact",
    "one_minus_z_asym",
    "k_max_used",
    "truncation_bound",
)


def partition_point(task) -> dict:
    eps, method, tol = task
    row = {"eps": str(eps), "eps_pow2": eps.pow2, "beta": eps.beta}
    if method == ASYMPTOTIC:
        row.update(z_exact=None, one_minus_z_exact=None, k_max_used=None, truncation_bound=None, method=ASYMPTOTIC)
    else:
        r = partition_exact(eps, tol, inner=A5_APPROX if method == A5_APPROX else EXACT)
        row.update(
            z_exact=r.total,
            one_minus_z_exact=r.one_minus_total,
            k_max_used=r.k_max_used,
            truncation_bound=r.truncation_bound,
            method=r.method,
            per_k=[[k, float(z)] for k, z in r.per_k],
        )
    if eps.is_zero:
        row.update(z_asymptotic=1.0, one_minus_z_asym=0.0, slog2_inv_eps=None, k_of_eps=None)
    else:
        d = asymptotic_deficit(eps)
        row.update(
            z_asymptotic=1.0 - d,
            one_minus_z_asym=d,
            slog2_inv_eps=slog2_of_inverse(eps),
            k_of_eps=k_of_eps(eps),
        )
    return row


def cmd_partition(args, cfg: RunConfig, out) -> int:
    grid = eps_grid(args)
    tol = args.tol if args.tol is not None else cfg.tol
    rows = _map(partition_point, [(e, args.method, tol) for e in grid], cfg.jobs)
    if args.format == "json":
        doc = rows[0] if len(rows) == 1 else rows
        _emit_json(doc, out)
    elif args.format == "csv":
        dyadic = all(e.is_dyadic for e in grid)
        key = "eps_pow2" if dyadic else "eps"
        header = (key,) + PARTITION_COLUMNS
        _emit_csv(
            header,
            ([r["eps_pow2"] if dyadic else grid[i].float_value] + [r[c] for c in PARTITION_COLUMNS] for i, r in enumerate(rows)),
            out,
        )
    else:
        for i, r in enumerate(rows):
            if i:
                out.write("\n")
            exact = args.method != ASYMPTOTIC
            pairs = [("eps", r["eps"]), ("beta", r["beta"])]
            if exact:
                pairs += [
                    ("z", r["z_exact"]),
                    ("one_minus_z", r["one_minus_z_exact"]),
                    ("truncation_bound", r["truncation_bound"]),
                    ("k_max_used", r["k_max_used"]),
                    ("z_asymptotic", r["z_asymptotic"]),
                ]
            else:
                pairs += [("z", r["z_asymptotic"]), ("one_minus_z", r["one_minus_z_asym"])]
            pairs += [("slog2_inv_eps", r["slog2_inv_eps"]), ("method", r["method"])]
            _emit_plain(pairs, out)
    return 0


# -- thermo --------------------------------------------------------------


def _thermo_task(task):
    eps, tcfg = task
    return thermo_point(eps, tcfg)


def cmd_thermo(args, cfg: RunConfig, out) -> int:
    grid = eps_grid(args)
    tcfg = ThermoConfig(
        tol=args.tol if args.tol is not None else min(cfg.tol, 1e-13),
        h_divisor=cfg.h_divisor,
        richardson=args.richardson or cfg.richardson,
    )
    points = _map(_thermo_task, [(e, tcfg) for e in grid], cfg.jobs)
    if args.format == "json":
        docs = [p.to_json() for p in points]
        _emit_json(docs[0] if len(docs) == 1 else docs, out)
    elif args.format == "csv":
        write_thermo_csv(points, out)
    else:
        for i, p in enumerate(points):
            if i:
                out.write("\n")
            _emit_plain(p.to_json().items(), out)
    return 0


# -- codec ---------------------------------------------------------------


def cmd_encode(args, cfg: RunConfig, out) -> int:
    try:
        n = int(args.N)
    except ValueError:
        raise DomainError(f"N must be a nonnegative integer, got {args.N!r}") from None
    prog = encode(n)
    if args.format == "json":
        _emit_json(prog.to_json(), out)
    elif args.format == "csv":
        _emit_csv(("N", "k", "chain", "length", "bits"), [(prog.N, prog.k, " ".join(map(str, prog.chain)), prog.length, str(prog.bits))], out)
    else:
        out.write(str(prog.bits) + "\n")
    return 0


def cmd_decode(args, cfg: RunConfig, out) -> int:
    d = decode(args.bits)
    if args.format == "json":
        _emit_json({"N": d.N, "consumed": d.bits_consumed}, out)
    elif args.format == "csv":
        _emit_csv(("N", "consumed"), [(d.N, d.bits_consumed)], out)
    else:
        out.write(f"N={d.N} consumed={d.bits_consumed}\n")
    return 0


def cmd_enumerate(args, cfg: RunConfig, out) -> int:
    if args.max_len > cfg.enumeration_bound:
        raise ResourceBoundError(f"max_len={args.max_len} exceeds the enumeration bound {cfg.enumeration_bound}")
    progs = enumerate_programs(args.max_len)
    if args.format == "json":
        _emit_json([{"bits": str(b), "N": n, "length": len(b)} for b, n in progs], out)
    elif args.format == "csv":
        _emit_csv(("bits", "N", "length"), [(str(b), n, len(b)) for b, n in progs], out)
    else:
        for b, n in progs:
            out.write(f"{b} {n}\n")
    return 0


# -- machines ------------------------------------------------------------


def load_machine(name: str) -> MachineSpec:
    if name in BUILTIN_MACHINES:
        return BUILTIN_MACHINES[name]()
    try:
        text = Path(name).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read machine table {name}: {exc.strerror}") from None
    return MachineSpec.from_text(text, name=Path(name).stem)


def _outcome_doc(outcome) -> dict:
    if isinstance(outcome, Halted):
        return {
            "outcome": "halted",
            "output": str(outcome.output),
            "ones": str(outcome.output).count("1"),
            "program_bits_read": outcome.program_bits_read,
            "steps": outcome.steps,
        }
    if isinstance(outcome, StepLimitExceeded):
        return {"outcome": "step_limit_exceeded", "steps": outcome.steps}
    if isinstance(outcome, ProgramExhausted):
        return {"outcome": "program_exhausted", "bits_available": outcome.bits_available, "steps": outcome.steps}
    if isinstance(outcome, InvalidWrite):
        return {"outcome": "invalid_write", "step": outcome.step, "position": outcome.position}
    raise TypeError(outcome)  # pragma: no cover


def cmd_simulate(args, cfg: RunConfig, out) -> int:
    spec = load_machine(args.table)
    if args.dump_table:
        out.write(spec.to_text())
        return 0
    limit = args.step_limit if args.step_limit is not None else cfg.step_limit
    if limit < 1:
        raise DomainError("step limit must be >= 1")
    trace = None
    if args.trace:
        out.write("# step state head program_head read program_read write\n")
        trace = lambda row: out.write(f"{row}\n")
    outcome = run(spec, args.program, limit, work=args.work, trace=trace)
    doc = _outcome_doc(outcome)
    if args.format == "json":
        _emit_json(doc, out)
    elif args.format == "csv":
        _emit_csv(tuple(doc), [tuple(doc.values())], out)
    else:
        _emit_plain(doc.items(), out)
    return 0


# -- prefix codes --------------------------------------------------------


def cmd_prefix_stats(args, cfg: RunConfig, out) -> int:
    code = code_from_name(args.code)
    if args.decay:
        lo, hi = (_parse_range(args.decay)[i] for i in (0, -1))
        fit = decay_estimate(code, lo, hi)
        doc = {"code": args.code, "l_min": lo, "l_max": hi, "model": fit.model, "parameter": fit.parameter,
               "rss_exponential": fit.rss_exponential, "rss_power": fit.rss_power}
        if args.singularity:
            grid = [2.0 ** -e for e in _parse_range(args.singularity)]
            s = power_law_singularity_check(None, grid, code)
            doc.update(singularity_exponent=s.exponent, alpha_minus_one=fit.parameter - 1.0)
        if args.format == "json":
            _emit_json(doc, out)
        elif args.format == "csv":
            _emit_csv(tuple(doc), [tuple(doc.values())], out)
        else:
            _emit_plain(doc.items(), out)
        return 0
    stats = generation_stats(code, args.l_max)
    if args.format == "json":
        _emit_json(
            {
                "code": args.code,
                "kraft_partial_sum": str(kraft_partial_sum(code, args.l_max)) if args.l_max <= 64 else None,
                "generations": [
                    {"l": s.l, "n_red": s.n_red, "m_black": s.m_black, "w_white": s.w_white,
                     "P_l": float(s.P_l), "Q_l": float(s.Q_l), "kraft_partial": float(s.kraft_partial)}
                    for s in stats
                ],
            },
            out,
        )
    elif args.format == "csv":
        write_stats_csv(stats, out)
    else:
        out.write("l n_red m_black w_white P_l Q_l kraft_partial\n")
        for s in stats:
            out.write(f"{s.l} {s.n_red} {s.m_black} {s.w_white} {s.P_l} {s.Q_l} {s.kraft_partial}\n")
    return 0


# -- verify --------------------------------------------------------------


def cmd_verify(args, cfg: RunConfig, out) -> int:
    from .verify import run_all

    results = run_all()
    for r in results:
        out.write(r.line() + "\n")
    return 0 if all(r.ok for r in results) else 1


# -- parser --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(f"usage: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("plain", "csv", "json"), default="plain")
    common.add_argument("--config", metavar="FILE", help="key = value defaults (flags override)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for eps grids")

    p = _Parser(prog="chaitin-ensemble", description="Counting-machine program ensemble toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", parents=[common], help="run a machine table on a program")
    s.add_argument("table", help="table file, or 'counting' / 'expander'")
    s.add_argument("program", nargs="?", default="", help="program bits")
    s.add_argument("--work", default="", help="initial work tape bits (head on the first)")
    s.add_argument("--step-limit", type=int)
    s.add_argument("--trace", action="store_true", help="print one line per step")
    s.add_argument("--dump-table", action="store_true", help="print the table in text form and exit")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("encode", parents=[common], help="program for N")
    s.add_argument("N")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode", parents=[common], help="read one program from a bit stream")
    s.add_argument("bits")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("enumerate", parents=[common], help="all programs up to a length")
    s.add_argument("max_len", type=int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("prefix-stats", parents=[common], help="red/black/white generation counts")
    s.add_argument("--code", default="counting", help="counting, fibonacci<N>, genfib")
    s.add_argument("--l-max", type=int, default=16)
    s.add_argument("--decay", metavar="LMIN:LMAX", help="fit the decay of P_l instead")
    s.add_argument("--singularity", metavar="A:B", help="with --decay: fit 1 - Z over eps = 2**-A..2**-B")
    s.set_defaults(func=cmd_prefix_stats)

    s = sub.add_parser("partition", parents=[common], help="partition function Z(beta)")
    _add_eps_flags(s)
    s.add_argument("--method", choices=(EXACT, HYBRID, A5_APPROX, ASYMPTOTIC), default=EXACT)
    s.add_argument("--tol", type=float)
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("thermo", parents=[common], help="F, <l> and heat capacity")
    _add_eps_flags(s)
    s.add_argument("--tol", type=float)
    s.add_argument("--richardson", action="store_true")
    s.set_defaults(func=cmd_thermo)

    s = sub.add_parser("verify", parents=[common], help="run the cross-module checks")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config).merged(jobs=args.jobs)
        buf = io.StringIO()
        status = args.func(args, cfg, buf)
        out.write(buf.getvalue())
        return status
    except EnsembleError as exc:
        err.write(f"error: {type(exc).__name__}: {' '.join(str(exc).split())}\n")
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
