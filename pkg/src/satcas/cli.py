"""Command-line front end.

Exit codes: 0 completed, 1 counterexample, 2 incomplete, 3 usage error,
4 soundness failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import orchestrator as R
from .config import SearchConfig, Tolerances
from .encoder import EncodingError, export_cnf

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INCOMPLETE, EXIT_USAGE, EXIT_SOUNDNESS = range(5)

# family -> (flag, params key)
SIZE_FLAGS = {
    "williamson": ("--order", "n"),
    "good": ("--order", "n"),
    "best": ("--order", "n"),
    "golay": ("--length", "n"),
    "ruskey-savage": ("--dim", "d"),
    "norine": ("--dim", "d"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _global_flags(top: bool) -> argparse.ArgumentParser:
    # nested copies must not reset values given before the subcommand
    dflt = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=_u64, default=dflt(0))
    p.add_argument("--tol", type=_positive_float, default=dflt(1e-6))
    p.add_argument("--json", action="store_true", default=dflt(False), help="print the report to stdout")
    p.add_argument("-v", "--verbose", action="store_true", default=dflt(False))
    return p


def _add_family(sub, family: str, parents, kind: str):
    flag, _ = SIZE_FLAGS[family]
    p = sub.add_parser(family, parents=parents)
    p.add_argument(flag, dest="size", type=int, required=True)
    if kind == "search":
        p.add_argument("--split-depth", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--timeout", type=_positive_float, default=600.0, help="seconds per subinstance")
        p.add_argument("--report", type=Path)
        p.add_argument("--no-prune", action="store_true")
        p.add_argument("--max-solutions", type=int)
        if family == "golay":
            p.add_argument("--stage1-only", action="store_true")
        if family in R.HYPERCUBE_FAMILIES:
            p.add_argument("--blocking", choices=("structure", "plain"), default="structure")
            p.add_argument("--orbits", choices=("full", "generators", "none"), default="full")
    if kind == "export":
        p.add_argument("--out", type=Path, required=True)
    p.set_defaults(family=family)
    return p


def build_parser() -> argparse.ArgumentParser:
    glob = _global_flags(top=False)
    parser = _Parser(prog="satcas", description="SAT+CAS searches for combinatorial objects",
                     parents=[_global_flags(top=True)])
    cmds = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for kind, name in (("search", "search"), ("oracle", "oracle"), ("export", "export-cnf")):
        p = cmds.add_parser(name, parents=[glob])
        fams = p.add_subparsers(dest="family_cmd", required=True, parser_class=_Parser)
        for fam in SIZE_FLAGS:
            _add_family(fams, fam, [glob], kind)
        p.set_defaults(kind=kind)
    return parser


def _config(args) -> SearchConfig:
    if getattr(args, "split_depth", 0) < 0 or getattr(args, "workers", 1) < 1:
        raise UsageError("split depth must be >= 0 and workers >= 1")
    kw = dict(seed=args.seed, tol=Tolerances(rel=args.tol))
    if args.kind == "search":
        kw.update(split_depth=args.split_depth, workers=args.workers, timeout=args.timeout,
                  prune=not args.no_prune, max_solutions=args.max_solutions,
                  golay_stage1_only=getattr(args, "stage1_only", False))
        if args.family in R.HYPERCUBE_FAMILIES:
            kw.update(hypercube_blocking=args.blocking, orbit_mode=args.orbits)
    return SearchConfig(**kw)


def _summary(rep: R.SearchReport) -> str:
    size = ", ".join(f"{k}={v}" for k, v in rep.params.items())
    lines = [f"{rep.family} ({size}): status={rep.status} verdict={rep.verdict}",
             f"  solutions={len(rep.solutions)} inequivalent={rep.inequivalent_count} checked={rep.checked}",
             f"  wall={rep.timing.get('wall', 0):.3f}s cpu={rep.timing.get('cpu', 0):.3f}s"]
    for s in rep.inequivalent[:5]:
        lines.append(f"  {s}")
    if rep.inequivalent_count > 5:
        lines.append(f"  ... {rep.inequivalent_count - 5} more")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    params = {SIZE_FLAGS[args.family][1]: args.size}
    try:
        cfg = _config(args)
        R.validate(args.family, params)
        if args.kind == "export":
            dimacs, varmap = export_cnf(R.encode(args.family, params, cfg))
            args.out.write_text(dimacs)
            sidecar = args.out.with_name(args.out.name + ".varmap.json")
            sidecar.write_text(varmap)
            print(f"wrote {args.out} and {sidecar}", file=sys.stderr)
            return EXIT_OK
        rep = R.run(args.family, params, cfg) if args.kind == "search" else R.brute_force(args.family, params)
    except (UsageError, R.ParameterError, EncodingError) as exc:
        print(f"satcas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except R.SoundnessError as exc:
        print(f"satcas: soundness failure: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    text = rep.to_json()
    if getattr(args, "report", None):
        args.report.write_text(text + "\n")
    if args.json:
        print(text)
    else:
        print(_summary(rep))
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
