"""Command-line runner for JSON experiment specs.

    synthcone run SPEC.json [--seed N] [--out DIR] [--jobs K]
    synthcone list-experiments [--filter S]

Exit codes: 0 when every declared tolerance is met, 1 on a tolerance
failure (with a diff report on stderr), 2 on a malformed spec.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import jsonschema

from . import experiments as ex
from .curves import CurveError
from .extended import fmt, to_json_number
from .factors import FactorError
from .spaces import SpaceError, StrategyError

# configuration problems surfacing while an experiment is assembled
CONFIG_ERRORS = (ex.SpecError, SpaceError, FactorError, CurveError, StrategyError)

SCHEMA_VERSION = "synthcone/1"


def load_schema():
    text = resources.files("synthcone").joinpath("schema/experiment.schema.json").read_text()
    return json.loads(text)


def parse_spec(path):
    """Experiment list from a spec file; raises SpecError on any problem."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ex.SpecError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ex.SpecError(f"{path} is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        raise ex.SpecError(f"{path} does not match {SCHEMA_VERSION}: {exc.message}") from None
    return doc["experiments"] if "experiments" in doc else [doc]


def _cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, (list, tuple)):
        return json.dumps([_json(x) for x in v])
    return fmt(v)


def _json(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, dict):
        return {str(k): _json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json(x) for x in v]
    try:
        return to_json_number(v)
    except (TypeError, ValueError):
        return str(v)


def _run_one(spec, seed, out_root):
    """Run one experiment and write its CSV and JSON.  Returns (name, passed, report lines)."""
    result = ex.run_experiment(spec, seed)
    out_dir = os.path.join(out_root, spec["name"])
    os.makedirs(out_dir, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([_cell(v) for v in row])
    with open(os.path.join(out_dir, "results.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    checks = [{"name": c.name, "kind": c.kind, "value": _json(c.value),
               "reference": _json(c.reference), "tol": _json(c.tol), "passed": c.passed}
              for c in result.checks]
    summary = {"schema": SCHEMA_VERSION, "name": spec["name"], "operation": spec["operation"],
               "seed": seed, "passed": result.passed, "checks": checks,
               "summary": _json(result.summary)}
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    lines = []
    for c in result.checks:
        if not c.passed:
            lines.append(f"FAIL {spec['name']}: {c.name} value={fmt(c.value)} "
                         f"reference={fmt(c.reference)} tol={fmt(c.tol)} ({c.kind})")
    return spec["name"], result.passed, lines


def _resolve_seed(spec, seed):
    if seed is not None:
        return int(seed)
    if "seed" in spec:
        return int(spec["seed"])
    if ex.is_stochastic(spec["operation"]):
        raise ex.SpecError(f"experiment {spec['name']!r} is stochastic and needs a seed")
    return 0


def cmd_run(args):
    try:
        specs = parse_spec(args.spec)
        seeds = [_resolve_seed(s, args.seed) for s in specs]
    except ex.SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    jobs = []
    for spec, seed in zip(specs, seeds):
        out_root = args.out or spec.get("output") or "results"
        jobs.append((spec, seed, out_root))
    try:
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                outcomes = list(pool.map(_run_one, *zip(*jobs)))
        else:
            outcomes = [_run_one(*j) for j in jobs]
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = False
    for name, passed, lines in outcomes:
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        for line in lines:
            print(line, file=sys.stderr)
        failed = failed or not passed
    return 1 if failed else 0


def cmd_list(args):
    for name in ex.list_experiments(args.filter):
        print(name)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="synthcone", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a JSON experiment spec")
    run.add_argument("spec")
    run.add_argument("--seed", type=int, default=None, help="override the spec seed")
    run.add_argument("--out", default=None, help="output root directory")
    run.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    run.set_defaults(func=cmd_run)
    lst = sub.add_parser("list-experiments", help="print the registry of reproductions")
    lst.add_argument("--filter", default=None, help="substring filter on names")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
