"""Command-line interface.

Subcommands:

* ``list-codes``     bundled codes with their basic figures of merit
* ``analyze``        analytic criteria table (one row per code)
* ``simulate``       Monte-Carlo FER/BER/NLD sweep
* ``entropy-curve``  residue entropy versus aggregation modulus
* ``cost-curve``     combined-decoding cost versus Eb/N0

Reports go to stdout or ``--out`` as CSV (default) or JSON; ``--plot``
additionally renders a figure file.
"""

from __future__ import annotations

import argparse
import sys

from . import plots
from .codes import excess_rate, mdl
from .experiments import (
    ExperimentConfig,
    run_cost_comparison,
    run_criteria_table,
    run_entropy_convergence,
    run_fer_sweep,
)
from .reporting import Report
from .tables import UnknownCode, get_code, list_code_ids
from .trellis import BIT_SYMBOL


class CliError(Exception):
    pass


def _parse_t(value: str):
    if value in (BIT_SYMBOL, "bs", "bitsymbol"):
        return BIT_SYMBOL
    try:
        t = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid trellis parameter {value!r}: use a positive integer or"
            f" '{BIT_SYMBOL}'")
    if t < 1:
        raise argparse.ArgumentTypeError("trellis parameter must be >= 1")
    return t


def _add_common(parser: argparse.ArgumentParser, *, codes: bool = True) -> None:
    if codes:
        parser.add_argument("--code", action="append", dest="codes",
                            metavar="ID", help="code id (repeatable);"
                            " default: all bundled codes")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", metavar="PATH",
                        help="write the report here instead of stdout")
    parser.add_argument("--plot", metavar="PATH",
                        help="also render a figure to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlcsync",
        description="Synchronization-recovery analysis and length-constrained"
                    " trellis decoding for variable-length codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-codes", help="list bundled codes")
    _add_common(p, codes=False)

    p = sub.add_parser("analyze", help="analytic criteria table")
    _add_common(p)
    p.add_argument("--ls", type=int, default=100, help="frame length, symbols")
    p.add_argument("--ebn0", type=float, action="append", dest="ebn0",
                   help="Eb/N0 in dB (one value; default 6)")
    p.add_argument("--eta", type=float, default=1e-6,
                   help="negligibility threshold for the pseudo-degree")

    p = sub.add_parser("simulate", help="Monte-Carlo FER/BER/NLD sweep")
    _add_common(p)
    p.add_argument("--ls", type=int, default=100)
    p.add_argument("--ebn0", type=float, action="append", dest="ebn0",
                   help="Eb/N0 in dB (repeatable; default 6)")
    p.add_argument("--T", action="append", dest="t_list", type=_parse_t,
                   metavar="T", help=f"aggregation parameter (repeatable):"
                   f" integer or '{BIT_SYMBOL}'")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, default=1e-6)
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes (results do not depend on it)")

    p = sub.add_parser("entropy-curve",
                       help="residue entropy versus aggregation modulus")
    _add_common(p)
    p.add_argument("--ls", type=int, default=100)
    p.add_argument("--ebn0", type=float, action="append", dest="ebn0")
    p.add_argument("--tmax", type=int, default=10)
    p.add_argument("--eta", type=float, default=1e-6)

    p = sub.add_parser("cost-curve",
                       help="combined-decoding cost versus Eb/N0")
    _add_common(p)
    p.add_argument("--ls", type=int, default=100)
    p.add_argument("--ebn0", type=float, action="append", dest="ebn0",
                   help="Eb/N0 in dB (repeatable; default 1..7)")
    p.add_argument("--t1", type=int, default=3)
    p.add_argument("--t2", type=int, default=4)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _codes_arg(args) -> tuple[str, ...]:
    codes = tuple(args.codes) if args.codes else tuple(list_code_ids())
    for code_id in codes:
        try:
            get_code(code_id)
        except UnknownCode:
            raise CliError(f"unknown code id {code_id!r}; try 'vlcsync"
                           " list-codes'") from None
    return codes


def _single_ebn0(args, default: float = 6.0) -> float:
    values = args.ebn0 or [default]
    if len(values) != 1:
        raise CliError("this command takes a single --ebn0 value")
    return values[0]


def _list_codes_report() -> Report:
    report = Report(columns=["code", "symbols", "l_m", "l_M", "mdl",
                             "excess_rate", "kraft_sum", "records"],
                    meta={"kind": "code_list"})
    records = {}
    for code_id in list_code_ids():
        code, source = get_code(code_id)
        report.add_row(
            code=code_id, symbols=len(code), l_m=code.l_m, l_M=code.l_M,
            mdl=mdl(code, source), excess_rate=excess_rate(code, source),
            kraft_sum=code.kraft_sum(),
            records=len(source.prob_strings),
        )
        records[code_id] = [
            {"symbol": s, "probability": ps, "codeword": cw}
            for s, ps, cw in zip(code.symbols, source.prob_strings,
                                 code.codewords)
        ]
    report.meta["records"] = records
    return report


def _run(args) -> Report:
    if args.command == "list-codes":
        return _list_codes_report()
    if args.command == "analyze":
        return run_criteria_table(_codes_arg(args), args.ls,
                                  _single_ebn0(args), args.eta)
    if args.command == "simulate":
        config = ExperimentConfig(
            codes=_codes_arg(args),
            l_s=args.ls,
            ebn0_list=tuple(args.ebn0 or [6.0]),
            t_list=tuple(args.t_list or [BIT_SYMBOL]),
            trials=args.trials,
            master_seed=args.seed,
            eta=args.eta,
        )
        return run_fer_sweep(config, workers=args.workers)
    if args.command == "entropy-curve":
        codes = _codes_arg(args)
        if len(codes) != 1:
            raise CliError("entropy-curve takes exactly one --code")
        return run_entropy_convergence(codes[0], args.ls, _single_ebn0(args),
                                       args.tmax, args.eta)
    if args.command == "cost-curve":
        codes = _codes_arg(args)
        if len(codes) != 1:
            raise CliError("cost-curve takes exactly one --code")
        ebn0_list = tuple(args.ebn0 or [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
        return run_cost_comparison(codes[0], args.ls, args.t1, args.t2,
                                   ebn0_list, args.trials, args.seed)
    raise CliError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _run(args)
        if args.out:
            report.write(args.out, args.format)
        else:
            sys.stdout.write(report.render(args.format))
        if args.plot:
            plots.render(report, args.plot)
    except (CliError, ValueError) as exc:
        print(f"vlcsync: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
