"""Command-line entry point: ``stokes <command> ...``.

Every command writes one JSON report (stable key order, version stamped)
to stdout or ``--out``.  Exit codes:

=====  ==============================================
0      all flags pass
1      a check ran and one of its flags failed
2      usage error
3      an input file is not valid JSON
4      an enumeration exceeded the state cap
5      a numeric tolerance check failed
6      an input parsed but describes an invalid object
=====  ==============================================
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import cocycles, descent, glp, groups, presenters
from .complex2 import CellularAction, StratComplex2
from .errors import CapExceededError, MismatchError, ParseError, StokesError
from .groupoid import FiniteGroupoid, brute_force_functor_count
from .io import (ExperimentConfig, Report, Stopwatch, cap_from_env, digest, dumps, load_json,
                 resolve)

EXIT_OK = 0
EXIT_FLAG = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAP = 4
EXIT_TOLERANCE = 5
EXIT_INVALID = 6


class UsageError(StokesError):
    pass


# ---------------------------------------------------------------------------
# commands: each takes a config and returns (results, flags)


def _need(config: ExperimentConfig, *roles: str) -> list[str]:
    missing = [r for r in roles if r not in config.inputs]
    if missing:
        raise UsageError(f"{config.command}: missing inputs {missing}")
    return [config.inputs[r] for r in roles]


def run_cocycles(config: ExperimentConfig):
    kpath, gpath = _need(config, "complex", "group")
    K = StratComplex2.from_json(load_json(kpath))
    G = groups.from_json(load_json(gpath))
    res = cocycles.classify(K, G, cap=config.cap)
    out = {"cocycle_count": res.cocycle_count}
    if config.options.get("orbits"):
        ctx = cocycles.LabelContext(K, G)
        out["orbit_count"] = res.orbit_count
        out["representatives"] = [c.as_dict(ctx) for c in res.representatives]
    return out, {}


def run_descent(config: ExperimentConfig):
    kpath, gpath, apath = _need(config, "complex", "group", "action")
    K = StratComplex2.from_json(load_json(kpath))
    G = groups.from_json(load_json(gpath))
    A = CellularAction.from_json(load_json(apath), K)
    rep = descent.descent_compare(K, A, G, cap=config.cap)
    return rep.to_json(), {"equal": rep.equal}


def run_pushout(config: ExperimentConfig):
    cpath, hpath = _need(config, "cospan", "target")
    c = presenters.Cospan.from_json(load_json(cpath))
    H = FiniteGroupoid.from_json(load_json(hpath))
    rep = presenters.rep_fiber_product_check(c, H, cap=config.cap)
    return rep.to_json(), {"equal": rep.equal}


def run_curve(config: ExperimentConfig):
    spath, tpath = _need(config, "spec", "target")
    T = groups.from_json(load_json(tpath))
    spec = presenters.curve_spec_from_json(load_json(spath), T)
    rep = presenters.curve_report(spec, T, cap=config.cap)
    out = rep.to_json()
    flags = {"delta_matches_stokes_word": rep.delta_matches_stokes_word}
    if all(G.order == 1 for pu in spec.punctures for G in pu.groups):
        # trivial Stokes data: only the peripheral relation remains
        flags["degenerate_matches_interior"] = rep.corrected_classes == rep.interior_trivialized_classes
    if config.options.get("brute_force"):
        P = presenters.build_curve_presenter(spec).groupoid
        out["brute_force_functors"] = brute_force_functor_count(P, FiniteGroupoid.from_group(T), cap=config.cap)
        flags["brute_force_agrees"] = out["brute_force_functors"] == rep.raw_functors
    return out, flags


def run_glp(config: ExperimentConfig):
    o = config.options
    k, n, trials = int(o.get("k", 2)), int(o.get("n", 1)), int(o.get("trials", 1000))
    out = glp.check_axioms(k, n, trials=trials, tol=config.tol, seed=config.seed)
    return out, {"pass": out["pass"]}


def run_subdivide(config: ExperimentConfig):
    kpath, gpath = _need(config, "complex", "group")
    K = StratComplex2.from_json(load_json(kpath))
    G = groups.from_json(load_json(gpath))
    rep = cocycles.subdivision_invariance(K, G, int(config.options.get("times", 2)), cap=config.cap)
    return {"counts": list(rep.counts), "equal": rep.equal}, {"equal": rep.equal}


def run_unipotent(config: ExperimentConfig):
    o = config.options
    lengths = [int(x) for x in o.get("lengths", [1, 2, 3, 4])]
    primes = [int(x) for x in o.get("primes", [2, 3])]
    exhaustive_max = int(o.get("exhaustive_max_dim", 3))
    rows, ok = [], True
    for length in lengths:
        idx = groups.PreorderedIndex.chain(length)
        for p in primes:
            predicted = p ** sum(idx.dims[a] * idx.dims[b] for a in range(length) for b in range(length)
                                 if idx.strictly_below(idx.labels[a], idx.labels[b]))
            order = groups.build_unipotent_stokes_group(idx, p).order
            row = {"length": length, "p": p, "order": order, "predicted": predicted}
            good = order == predicted
            if idx.total_dim <= exhaustive_max:
                row["exhaustive"] = len(groups.filtered_kernel_by_exhaustion(idx, p))
                good &= row["exhaustive"] == order
            row["match"] = good
            ok &= good
            rows.append(row)
    return {"rows": rows}, {"orders_match": ok}


COMMANDS: dict[str, Callable] = {
    "cocycles": run_cocycles,
    "descent": run_descent,
    "pushout": run_pushout,
    "curve": run_curve,
    "glp-check": run_glp,
    "subdivide-invariance": run_subdivide,
    "unipotent-check": run_unipotent,
}


def run(config: ExperimentConfig) -> Report:
    """Dispatch one command.  Library errors are captured in the report."""
    if config.command not in COMMANDS:
        raise UsageError(f"unknown command {config.command!r}")
    digests = {role: digest(p) for role, p in sorted(config.inputs.items()) if Path(p).is_file()}
    with Stopwatch() as sw:
        try:
            results, flags = COMMANDS[config.command](config)
            error = None
        except (StokesError, OSError) as exc:
            results, flags = {}, {}
            error = {"type": type(exc).__name__, "message": str(exc), "exit_code": exit_code_for(exc)}
        except (KeyError, TypeError, ValueError) as exc:
            # malformed but syntactically valid input documents
            results, flags = {}, {}
            error = {"type": "ValidationError", "message": f"malformed input: {type(exc).__name__}: {exc}",
                     "exit_code": EXIT_INVALID}
    return Report(config, results, flags, digests, sw.elapsed, error)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, CapExceededError):
        return EXIT_CAP
    if isinstance(exc, MismatchError):
        return EXIT_TOLERANCE
    return EXIT_INVALID


def report_exit_code(report: Report) -> int:
    if report.error is not None:
        return report.error["exit_code"]
    if report.passed:
        return EXIT_OK
    return EXIT_TOLERANCE if report.config.command == "glp-check" else EXIT_FLAG


# ---------------------------------------------------------------------------
# suite


def _suite_entry(args) -> dict:
    name, config, expect = args
    rep = run(config)
    doc = rep.to_json()
    mismatched = {k: {"expected": v, "got": rep.results.get(k)} for k, v in expect.items()
                  if rep.results.get(k) != v}
    doc["name"] = name
    doc["expect"] = expect
    if mismatched:
        doc["expect_mismatch"] = mismatched
    doc["pass"] = rep.passed and not mismatched
    doc["exit_code"] = report_exit_code(rep) if not rep.passed else (EXIT_FLAG if mismatched else EXIT_OK)
    return doc


def suite(manifest_path: str, *, cap: int, jobs: int = 1) -> dict:
    """Run every experiment of a manifest; one failure does not stop the rest.

    Manifest: ``{"experiments": [{"name", "command", "inputs": {role: path},
    "options": {...}, "tol", "seed", "expect": {result key: value}}]}``.
    Paths are relative to the manifest.  Results are listed in manifest
    order whatever ``jobs`` is.
    """
    doc = load_json(manifest_path)
    base = Path(manifest_path).parent
    tasks = []
    for k, e in enumerate(doc.get("experiments", [])):
        if e.get("command") not in COMMANDS:
            raise UsageError(f"experiment {k}: unknown command {e.get('command')!r}")
        config = ExperimentConfig(e["command"], resolve(base, e.get("inputs", {})), dict(e.get("options", {})),
                                  cap=int(e.get("cap", cap)), tol=float(e.get("tol", 1e-9)),
                                  seed=int(e.get("seed", 0)))
        tasks.append((e.get("name", f"experiment-{k}"), config, dict(e.get("expect", {}))))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_suite_entry, tasks))
    else:
        entries = [_suite_entry(t) for t in tasks]
    return {"experiments": entries, "total": len(entries), "passed": sum(e["pass"] for e in entries),
            "pass": all(e["pass"] for e in entries)}


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokes", description="Skeletal presenters for Stokes torsors.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="enumeration state cap (default: $STOKES_CAP or 1e7)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("cocycles", parents=[common], help="count cocycles and gauge classes")
    s.add_argument("--complex", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--orbits", action="store_true", help="also report gauge classes and representatives")

    s = sub.add_parser("descent", parents=[common], help="equivariant classes against the quotient")
    s.add_argument("--complex", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--action", required=True)

    s = sub.add_parser("pushout", parents=[common], help="functors out of a pushout against cocones")
    s.add_argument("--cospan", required=True)
    s.add_argument("--target", required=True)

    s = sub.add_parser("curve", parents=[common], help="curve presenter counts and gluing check")
    s.add_argument("--spec", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--brute-force", action="store_true", help="cross-check the raw functor count naively")

    s = sub.add_parser("glp-check", parents=[common], help="random-trial check of the chart axioms")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("subdivide-invariance", parents=[common], help="class counts under subdivision")
    s.add_argument("--complex", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--times", type=int, default=2)

    s = sub.add_parser("unipotent-check", parents=[common], help="unipotent group orders on chains")
    s.add_argument("--lengths", type=int, nargs="+", default=[1, 2, 3, 4])
    s.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    s.add_argument("--exhaustive-max-dim", type=int, default=3)

    s = sub.add_parser("suite", parents=[common], help="run an experiment manifest")
    s.add_argument("--manifest", required=True)
    s.add_argument("--jobs", type=int, default=1)
    return p


_INPUT_ROLES = ("complex", "group", "action", "cospan", "target", "spec")
_OPTION_KEYS = ("orbits", "brute_force", "k", "n", "trials", "times", "lengths", "primes", "exhaustive_max_dim")


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cap = args.cap if args.cap is not None else cap_from_env()
        if args.command == "suite":
            doc = suite(args.manifest, cap=cap, jobs=args.jobs)
            _emit(doc, args.out)
            return EXIT_OK if doc["pass"] else EXIT_FLAG
        ns = vars(args)
        config = ExperimentConfig(args.command, {r: ns[r] for r in _INPUT_ROLES if ns.get(r) is not None},
                                  {k: ns[k] for k in _OPTION_KEYS if k in ns}, cap=cap,
                                  tol=ns.get("tol", 1e-9), seed=ns.get("seed", 0), output=args.out)
    except UsageError as exc:
        print(f"stokes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StokesError as exc:
        print(f"stokes: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    report = run(config)
    _emit(report.to_json(), config.output)
    if report.error is not None:
        print(f"stokes: {report.error['message']}", file=sys.stderr)
    return report_exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
