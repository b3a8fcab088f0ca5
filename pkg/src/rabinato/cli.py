"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 resource-cap error,
3 cross-check or fixture disagreement.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import formula as fm
from . import oracle as oc
from .compiler import BuildOptions, build_automaton, stats
from .fixtures import run_fixtures, write_report
from .hoa import emit_dot, emit_hoa
from .parser import ParseError, parse


def _build_parser():
    p = argparse.ArgumentParser(prog="rabinato",
                                description="LTL to deterministic "
                                            "generalized Rabin automata")
    sub = p.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("translate", help="compile a formula")
    tr.add_argument("formula")
    tr.add_argument("--format", choices=("hoa", "dot", "stats"), default="hoa")
    tr.add_argument("--no-relevance", action="store_true",
                    help="keep every monitor in every state")
    tr.add_argument("--state-cap", type=int, default=1_000_000)
    tr.add_argument("--disjunct-cap", type=int, default=10_000)

    xc = sub.add_parser("xcheck", help="randomized agreement with the "
                                       "lasso-word oracle")
    xc.add_argument("--seed", type=int,
                    default=int(os.environ.get("RABINATO_SEED", "20140701")))
    xc.add_argument("--samples", type=int, default=1000)
    xc.add_argument("--max-nodes", type=int, default=12)
    xc.add_argument("--atoms", type=int, default=3)

    fx = sub.add_parser("fixtures", help="run the reference fixture table")
    fx.add_argument("--report-dir", default=None,
                    help="also write fixtures.csv and fixture_states.png here")
    return p


def cmd_translate(args):
    f = parse(args.formula)
    opts = BuildOptions(relevance=not args.no_relevance,
                        state_cap=args.state_cap,
                        disjunct_cap=args.disjunct_cap)
    aut = build_automaton(f, opts)
    if args.format == "hoa":
        sys.stdout.write(emit_hoa(aut))
    elif args.format == "dot":
        sys.stdout.write(emit_dot(aut))
    else:
        sys.stdout.write(json.dumps(stats(aut)) + "\n")
    return 0


def cmd_xcheck(args):
    rng = random.Random(args.seed)
    names = tuple("abcdefghijklmnopqrstuvwxyz"[:max(1, args.atoms)])
    words_per_formula = 5
    agree = 0
    disagree = 0
    total = 0
    while total < args.samples:
        f = oc.random_formula(rng, args.max_nodes, names)
        aut = build_automaton(f)
        for _ in range(min(words_per_formula, args.samples - total)):
            w = oc.random_lasso(rng, 4, 4, names)
            total += 1
            want = oc.evaluate(f, w)
            got = oc.accepts(aut, w)
            if got == want:
                agree += 1
            else:
                disagree += 1
                print(f"disagree: {f}  on {w}: oracle={want} automaton={got}",
                      file=sys.stderr)
    print(f"{agree}/{total} agree")
    return 0 if disagree == 0 else 3


def cmd_fixtures(args):
    rows = run_fixtures()
    width = max(len(r.name) for r in rows)
    failed = 0
    for r in rows:
        status = "pass" if r.ok else "FAIL"
        if not r.ok:
            failed += 1
        note = f"  ({r.note})" if r.note else ""
        print(f"{status}  {r.name:<{width}}  expected {r.expected}  "
              f"got {r.actual}{note}")
    print(f"{len(rows) - failed}/{len(rows)} fixtures pass")
    if args.report_dir:
        csv_path, png_path = write_report(rows, args.report_dir)
        print(f"report written to {csv_path} and {png_path}")
    return 0 if failed == 0 else 3


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "translate":
            code = cmd_translate(args)
        elif args.command == "xcheck":
            code = cmd_xcheck(args)
        else:
            code = cmd_fixtures(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        code = 1
    except fm.CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        code = 2
    return code


if __name__ == "__main__":
    sys.exit(main())
