"""Command line entry point: ``grassmannian <experiment> [--config PATH] ...``.

Exit status is 0 when every check passes, 1 on a failed check and 2 on an
invalid configuration.
"""

import argparse
import sys

from .errors import ConfigInvalid
from .scenarios import EXPERIMENTS, default_suite, dumps, load_config, validate, verify_suite, write_outputs


def build_parser():
    parser = argparse.ArgumentParser(prog="grassmannian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", metavar="PATH", help="YAML scenario or suite file")
        p.add_argument("--out", metavar="DIR", help="write report.json, timings.json and CSV files here")
        p.add_argument("--seed", type=int, metavar="U64", help="override every scenario's seed")
        p.add_argument("--resolution", type=int, metavar="M", help="override every scenario's resolution")
        p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    return parser


def _select(args):
    scenarios = load_config(args.config) if args.config else default_suite()
    if args.experiment != "verify-all":
        chosen = [s for s in scenarios if s.experiment == args.experiment]
        if not chosen:
            where = args.config or "default suite"
            raise ConfigInvalid(where, f"no scenario with experiment {args.experiment!r}")
        scenarios = chosen if args.config else chosen[:1]
    out = []
    for i, s in enumerate(scenarios):
        raw = {"id": s.id, "experiment": s.experiment, "ambient": s.ambient, "resolution": s.resolution,
               "seed": s.seed, "tolerances": s.tolerances, "params": s.params}
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.resolution is not None:
            raw["resolution"] = args.resolution
        out.append(validate(raw, f"scenarios[{i}]"))
    return out


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        scenarios = _select(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report, outcomes = verify_suite(scenarios)
    if args.out:
        write_outputs(args.out, report, outcomes)
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        for r in report["scenarios"]:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{status}  {r['id']} ({r['experiment']})")
            for c in r["checks"]:
                mark = "ok " if c["passed"] else "BAD"
                print(f"    {mark} {c['name']} = {c['value']} {c['relation']} {c['tolerance']}")
            if r["error"]:
                print(f"    error {r['error']['type']}: {r['error']['message']}")
        s = report["summary"]
        print(f"{s['scenarios'] - len(s['failed'])}/{s['scenarios']} scenarios passed")
    return 0 if report["summary"]["passed"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
