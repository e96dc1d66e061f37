"""Command line front end.

Exit status: 0 when every asserted inequality holds, 2 when any is violated,
3 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import sys

from . import lab
from .dense import loads_matrix

EXIT_OK, EXIT_VIOLATIONS, EXIT_CONFIG = 0, 2, 3

DEFAULTS = {
    "uncertainty": dict(d=3, n=2, count=100, L=8, family="mixed"),
    "extremality": dict(d=2, n=2, count=100, L=8, family="mixed"),
    "monotonicity": dict(d=7, n=1, count=20, L=8, family="full"),
    "clt": dict(d=7, n=1, count=20, L=8, family="full"),
}


def _alphas(text: str) -> tuple:
    try:
        return tuple(float(a) for a in text.split(",") if a.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stablab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in lab.EXPERIMENTS:
        dflt = DEFAULTS[name]
        sp = sub.add_parser(name, help=f"run the {name} suite")
        sp.add_argument("--d", type=int, default=dflt["d"], help="prime local dimension")
        sp.add_argument("--n", type=int, default=dflt["n"], help="number of qudits")
        sp.add_argument("--count", type=int, default=dflt["count"], help="number of generated states")
        sp.add_argument("--family", default=dflt["family"], choices=lab.FAMILIES, help="state family")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--alpha", type=_alphas, default=(0.5, 1.0, 2.0), help="comma-separated Renyi orders")
        sp.add_argument("--s", type=int, default=None, help="convolution parameter s")
        sp.add_argument("--t", type=int, default=None, help="convolution parameter t")
        sp.add_argument("--L", type=int, default=dflt["L"], help="number of convolution steps")
        sp.add_argument("--out", default=f"out/{name}", help="output directory")
        sp.add_argument("--unit", choices=("nats", "dits"), default="nats")
    sp = sub.add_parser("state", help="analyze a single state read from a matrix file")
    sp.add_argument("path", help="matrix file ('dim d n' header, then 'i j re im' rows)")
    sp.add_argument("--d", type=int, default=None, help="local dimension (defaults to the file header)")
    sp.add_argument("--alpha", type=_alphas, default=(0.5, 1.0, 2.0))
    sp.add_argument("--out", default="out/state")
    sp.add_argument("--unit", choices=("nats", "dits"), default="nats")
    return p


def _summary(report: lab.Report, paths) -> str:
    lines = [f"{report.experiment}: {len(report.rows)} checks, {report.violations} violations"]
    for name, c in report.checks().items():
        lines.append(f"  {'ok  ' if not c['violations'] else 'FAIL'} {name}  [{c['cases']} cases, {c['violations']} violations]")
    for key, val in report.summary.items():
        lines.append(f"  {key}: {val}")
    lines.append(f"  wrote {len(paths)} files to {report.config.out}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "state":
            with open(args.path, encoding="utf-8") as fh:
                rho, d_file = loads_matrix(fh.read())
            d = d_file if args.d is None else args.d
            report = lab.analyze_state(rho, d, args.alpha, args.unit, args.out)
        else:
            config = lab.ExperimentConfig(
                args.command, n=args.n, d=args.d, family=args.family, count=args.count, seed=args.seed,
                alphas=args.alpha, s=args.s, t=args.t, L=args.L, out=args.out, unit=args.unit,
            ).validate()
            report = lab.run(config)
        paths = lab.emit(report)
    except (lab.ConfigError, OSError) as exc:
        print(f"stablab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"stablab: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(_summary(report, paths))
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
