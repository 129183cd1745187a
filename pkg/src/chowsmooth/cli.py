"""Command line front-end.

    chowsmooth verify-case FILE [--saturate] [--drop-relation K]
    chowsmooth verify-all [--corpus y6|y5|all] [--saturate] [--jobs N]
    chowsmooth facts FILE
    chowsmooth oracle [FILE ...]
    chowsmooth identities
    chowsmooth homology

Common flags: --seed, --trials, --bound, --format text|structured.
Exit status: 0 when every check passes, 1 on a failed check, 2 on usage or
parse errors.  Reports are sorted by case name whatever order workers finish
in, and carry a manifest with the content hash of every corpus file read.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .charts import ValidationError, check_facts, corpus_files, load_case
from .cotangent import ablate, saturating_relations, verify_case
from .homology import all_patterns, run_trials
from .poly import ParseError
from .sampler import SampleConfig, cross_chart_agreement, run_identities, validate_case_formulas

JOBS_ENV = "CHOWSMOOTH_JOBS"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _version():
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:
        return "unknown"


def _file_entry(path):
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _default_jobs():
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def _manifest(args, paths):
    return {
        "subcommand": args.command,
        "seed": args.seed,
        "trials": args.trials,
        "bound": args.bound,
        "format": args.format,
        "jobs": getattr(args, "jobs", None) or 1,
        "saturate": bool(getattr(args, "saturate", False)),
        "version": _version(),
        "corpus": [_file_entry(p) for p in paths],
    }


# ---------------------------------------------------------------- workers (top level so they pickle)

def _verify_path(path, seed, bound, saturate, drop):
    case = load_case(path)
    relations = list(case.relations)
    dropped = None
    if drop is not None:
        try:
            relations = ablate(case, drop)
        except IndexError as exc:
            raise UsageError(str(exc)) from None
        dropped = "; ".join(r.text() for r in case.relations if r not in relations)
    extra = 0
    if saturate:
        more = saturating_relations(case)
        extra = len(more)
        relations += more
    t0 = time.perf_counter()
    ok, rep = verify_case(case, seed=seed, bound=bound, relations=relations)
    doc = rep.to_dict()
    doc["file"] = str(path)
    if dropped is not None:
        doc["dropped_relation"] = dropped
    if saturate:
        doc["saturating_relations"] = extra
    return doc, time.perf_counter() - t0


def _oracle_path(path, seed, trials, bound):
    case = load_case(path)
    cfg = SampleConfig(seed, trials, bound)
    formulas = validate_case_formulas(case, cfg)
    agreement = cross_chart_agreement(case, cfg)
    published = [f for f in formulas if f["published"]]
    return {
        "case": case.case_name,
        "file": str(path),
        "formulas": formulas,
        "published_formulas": len(published),
        "published_passed": sum(f["passed"] for f in published),
        "formulas_passed": all(f["passed"] for f in formulas),
        "agreement": agreement,
        "passed": all(f["passed"] for f in formulas) and agreement["passed"],
    }


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *it) for it in items]
        return [f.result() for f in futures]


# ---------------------------------------------------------------- text rendering

def _verify_line(doc):
    status = "PASS" if doc["passed"] else "FAIL"
    exp = doc["expected_corank"]
    exp_txt = f"/{exp}" if exp is not None else ""
    line = f"{status} {doc['case']:<10} corank {doc['corank']}{exp_txt}  rank {doc['rank']}/{doc['n_differentials']}"
    line += f"  span {','.join(doc['spanning'])}"
    if doc["expected_spanning"]:
        line += f"  (expected {','.join(doc['expected_spanning'])}: {'ok' if doc['spanning_ok'] else 'mismatch'})"
    line += f"  sampled {','.join(map(str, doc['sampled_ranks']))}"
    if "saturating_relations" in doc:
        line += f"  +{doc['saturating_relations']} saturating"
    if "dropped_relation" in doc:
        line += f"  dropped [{doc['dropped_relation']}]"
    if doc["error"]:
        line += f"  error: {doc['error']}"
    return line


def _render_verify(docs, detail):
    out = []
    for d in docs:
        out.append(_verify_line(d))
        if detail:
            for c in d["base_constraints"]:
                out.append(f"    base: {c['solution']}   [{c['relation']}]")
            for s in d["relations"]:
                if s.get("row") != "kept":
                    out.append(f"    relation {s['label']} {s['relation']}: {s.get('row')}")
    npass = sum(d["passed"] for d in docs)
    out.append(f"{npass}/{len(docs)} cases pass")
    return out


def _render_facts(doc):
    out = []
    for f in doc["facts"]:
        status = "PASS" if f["pass"] else "FAIL"
        extra = f"  ({f['error']})" if f["error"] else ""
        out.append(f"{status} chart {f['chart']} {f['spec']}: expected {f['expected']}, got {f['computed']}{extra}")
    out.append(f"{sum(f['pass'] for f in doc['facts'])}/{len(doc['facts'])} facts pass for {doc['case']}")
    return out


def _render_oracle(docs):
    out = []
    for d in docs:
        fs = d["formulas"]
        a = d["agreement"]
        status = "PASS" if d["passed"] else "FAIL"
        out.append(
            f"{status} {d['case']:<10} formulas {sum(f['passed'] for f in fs)}/{len(fs)}"
            f" (published {d['published_passed']}/{d['published_formulas']})"
            f"  agreement {a['accepted']}/{a['trials']} trials, sampled {a['sampled']},"
            f" {a['checked']} checked, {len(a['unresolvable'])} unresolvable, {a['rejected']} rejected"
        )
        for f in fs:
            if not f["passed"]:
                out.append(f"    formula chart {f['chart']} {f['spec']} = {f['expected']}: {f['counterexample']}")
        if a["failure"]:
            out.append(f"    disagreement: {a['failure']}")
    pub = sum(d["published_formulas"] for d in docs)
    pub_ok = sum(d["published_passed"] for d in docs)
    out.append(f"published formulas validated: {pub_ok}/{pub}")
    return out


def _render_identities(docs):
    out = []
    for d in docs:
        status = "PASS" if d["passed"] else "FAIL"
        body = {k: v for k, v in d.items() if k not in ("suite", "passed", "counterexample")}
        out.append(f"{status} {d['suite']:<20} " + "  ".join(f"{k}={v}" for k, v in body.items()))
    return out


def _render_homology(docs):
    out = []
    for d in docs:
        status = "PASS" if d["passed"] else "FAIL"
        out.append(
            f"{status} pattern {d['pattern']} ({d['beta']} beta, {d['alpha']} alpha): coefficients {d['coefficients']}"
            f" over {d['trials']} trials, rejected {d['rejected']} (rate {d['rejection_rate']:.4f})"
        )
    return out


def _first_failure(command, docs):
    """Name of the first failing check, for the stderr summary."""
    for d in docs:
        if d.get("passed", True):
            continue
        if command in ("verify-case", "verify-all"):
            return f"{d['case']}: {d['error']}"
        if command == "facts":
            f = next(f for f in d["facts"] if not f["pass"])
            return f"{d['case']}: DegeneracyFact chart {f['chart']} {f['spec']} expected {f['expected']}, got {f['computed']}"
        if command == "oracle":
            bad = next((f for f in d["formulas"] if not f["passed"]), None)
            if bad is not None:
                return f"{d['case']}: FormulaMismatch chart {bad['chart']} {bad['spec']} = {bad['expected']}"
            return f"{d['case']}: CrossChartDisagreement {d['agreement']['failure']}"
        if command == "identities":
            return f"{d['suite']}: {d.get('counterexample')}"
        if command == "homology":
            return f"pattern {d['pattern']}: coefficients {d['coefficients']}"
    return "unknown"


# ---------------------------------------------------------------- commands

def _corpus_paths(kind):
    return [str(p) for p in corpus_files(kind)]


def cmd_verify(args, paths):
    jobs = args.jobs or _default_jobs()
    args.jobs = jobs
    items = [(p, args.seed, args.bound, args.saturate, getattr(args, "drop_relation", None)) for p in paths]
    results = _map(_verify_path, items, jobs)
    docs = sorted((r[0] for r in results), key=lambda d: d["case"])
    if args.timing:
        for (doc, secs) in sorted(results, key=lambda r: r[0]["case"]):
            print(f"{doc['case']}: {secs:.2f} s", file=sys.stderr)
    passed = all(d["passed"] for d in docs)
    return docs, passed, _render_verify(docs, args.detail)


def cmd_facts(args, paths):
    case = load_case(paths[0])
    rep = check_facts(case)
    doc = {"case": case.case_name, "file": paths[0], "facts": rep, "passed": all(f["pass"] for f in rep)}
    return [doc], doc["passed"], _render_facts(doc)


def cmd_oracle(args, paths):
    jobs = args.jobs or _default_jobs()
    args.jobs = jobs
    items = [(p, args.seed, args.trials, args.bound) for p in paths]
    docs = sorted(_map(_oracle_path, items, jobs), key=lambda d: d["case"])
    return docs, all(d["passed"] for d in docs), _render_oracle(docs)


def cmd_identities(args, paths):
    docs = run_identities(SampleConfig(args.seed, args.trials, args.bound))
    return docs, all(d["passed"] for d in docs), _render_identities(docs)


def cmd_homology(args, paths):
    docs = [run_trials(p, args.trials, args.seed, args.bound) for p in all_patterns()]
    return docs, all(d["passed"] for d in docs), _render_homology(docs)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    common.add_argument("--trials", type=int, default=None, help="trials per check")
    common.add_argument("--bound", type=int, default=97, help="bound on sampled numerators/denominators")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")

    p = argparse.ArgumentParser(prog="chowsmooth", description="Exact cotangent checks for chart atlases.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-case", parents=[common], help="verify one case file")
    v.add_argument("file")
    v.add_argument("--saturate", action="store_true", help="add every pencil cross-ratio shared by two charts")
    v.add_argument("--drop-relation", type=int, default=None, metavar="K", help="delete declared relation line K (0-based) with its symmetric images")
    v.add_argument("--detail", action="store_true", help="print base constraints and relation statuses")
    v.add_argument("--timing", action="store_true", help="print wall-clock time per case on stderr")

    va = sub.add_parser("verify-all", parents=[common], help="verify the bundled corpus")
    va.add_argument("--corpus", choices=("y6", "y5", "all"), default="y6")
    va.add_argument("--saturate", action="store_true")
    va.add_argument("--detail", action="store_true")
    va.add_argument("--timing", action="store_true")

    f = sub.add_parser("facts", parents=[common], help="check the degeneracy facts of a case file")
    f.add_argument("file")

    o = sub.add_parser("oracle", parents=[common], help="closed forms and cross-chart agreement by sampling")
    o.add_argument("files", nargs="*", help="case files (default: whole bundled corpus)")

    sub.add_parser("identities", parents=[common], help="identity suites and dual-route invariant checks")
    sub.add_parser("homology", parents=[common], help="coefficient trials for the five condition patterns")
    return p


_DEFAULT_TRIALS = {"identities": 1000, "oracle": 100, "homology": 100}

_COMMANDS = {
    "verify-case": cmd_verify,
    "verify-all": cmd_verify,
    "facts": cmd_facts,
    "oracle": cmd_oracle,
    "identities": cmd_identities,
    "homology": cmd_homology,
}


def run(argv=None, stdout=None):
    """Parse, dispatch, print; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.trials is None:
        args.trials = _DEFAULT_TRIALS.get(args.command, 100)
    if args.trials <= 0 or args.bound <= 0:
        print("error: --trials and --bound must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.command in ("verify-case", "facts"):
        paths = [args.file]
    elif args.command == "verify-all":
        paths = _corpus_paths(args.corpus)
    elif args.command == "oracle":
        paths = args.files or _corpus_paths("all")
    else:
        paths = []
    try:
        manifest = _manifest(args, paths)
        docs, passed, lines = _COMMANDS[args.command](args, paths)
        manifest["jobs"] = getattr(args, "jobs", None) or 1
    except (ParseError, ValidationError, UsageError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "structured":
        json.dump({"manifest": manifest, "reports": docs, "passed": passed}, stdout, indent=2)
        stdout.write("\n")
    else:
        stdout.write(f"# chowsmooth {manifest['version']} {args.command} seed={args.seed} trials={args.trials} bound={args.bound}\n")
        for entry in manifest["corpus"]:
            stdout.write(f"# {entry['sha256'][:16]} {entry['path']}\n")
        for line in lines:
            stdout.write(line + "\n")
    if not passed:
        print(f"check failed: {_first_failure(args.command, docs)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
