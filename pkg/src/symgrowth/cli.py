"""Command-line front door.

Every subcommand is a thin wrapper over a library call: parse an instance
spec, run the analysis, emit canonical JSON (or CSV for sweeps).  Exit
codes: 0 success (and verified, where that applies), 1 completed but
verification failed, 2 invalid input, 3 pair budget exceeded.  Errors are
written to stderr as one-line JSON objects.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .budget import set_pair_budget
from .errors import InvariantViolation, PairBudgetError, SymGrowthError
from .growth import almost_invariant, shrink_step, stable_neighbourhood
from .gset import doubling_stats
from .instances import family_sweep, generate
from .oracle import verify_certificate
from .serialize import (
    atomic_write_text,
    canonical_dumps,
    elements_to_json,
    fraction_to_str,
    load_json,
    parse_fraction,
)
from .symmetry import sym_set

STAT_COLUMNS = ("size", "product_size", "inverse_product_size", "quad_size", "doubling")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="symgrowth",
        description="Exact growth analysis of finite sets in groups, with certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", required=True, help="instance spec JSON file")
        p.add_argument("--out", help="write output here (atomically) instead of stdout")
        p.add_argument("--budget-pairs", type=int, help="override the pair budget for this run")
        p.add_argument("--trace", action="store_true", help="log per-step progress to stderr")

    p = sub.add_parser("stats", help="exact sizes and doubling of the instance set")
    common(p)

    p = sub.add_parser("sym", help="symmetry set of the instance set at a threshold")
    common(p)
    p.add_argument("--eta", required=True, help="threshold in (0,1] as an exact fraction, e.g. 4/5")

    p = sub.add_parser("lemma", help="one shrink step on A' = A")
    common(p)
    p.add_argument("--epsilon", required=True, help="slack in (0,1] as an exact fraction")

    p = sub.add_parser("run", help="full driver: emit a certificate for S with S^k in A^2A^-2")
    common(p)
    p.add_argument("--k", required=True, type=int, help="power parameter k >= 1")

    p = sub.add_parser("invariant", help="almost-invariant level along A, SA, ..., S^kA")
    common(p)
    p.add_argument("--k", required=True, type=int, help="power parameter k >= 1")

    p = sub.add_parser("sweep", help="doubling stats over a parameter grid, as CSV")
    common(p)

    p = sub.add_parser("verify", help="independently recheck a certificate against an instance")
    common(p)
    p.add_argument("--certificate", required=True, help="certificate JSON file")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _emit_json(payload, out: str | None) -> None:
    _emit(canonical_dumps(payload), out)


def _step_logger(enabled: bool):
    if not enabled:
        return None

    def hook(record):
        print(json.dumps(record.as_dict(), sort_keys=True), file=sys.stderr)

    return hook


def cmd_stats(args) -> int:
    spec = load_json(args.instance, "instance")
    stats = doubling_stats(generate(spec))
    _emit_json({"instance": spec, "stats": stats.as_dict()}, args.out)
    return 0


def cmd_sym(args) -> int:
    spec = load_json(args.instance, "instance")
    eta = parse_fraction(args.eta, "--eta")
    result = sym_set(generate(spec), eta)
    payload = {
        "instance": spec,
        "eta": eta,
        "base_size": len(result.base),
        "members": elements_to_json(result.members.elements),
        "size": len(result.members),
    }
    _emit_json(payload, args.out)
    return 0


def cmd_lemma(args) -> int:
    spec = load_json(args.instance, "instance")
    eps = parse_fraction(args.epsilon, "--epsilon")
    a = generate(spec)
    out = shrink_step(a, a, eps)
    payload = {
        "instance": spec,
        "epsilon": eps,
        "case": out.case,
        "aprime_size": len(out.aprime),
        "product_size": len(out.product),
        "tau": out.tau,
        "level_set_size": len(out.level_set),
        "entries": [{**e.as_dict(), "name": f"step0.{e.name}"} for e in out.entries],
    }
    if out.case == "shrink":
        payload["t"] = list(out.t)
        payload["shrunk_size"] = len(out.shrunk)
        payload["shrunk_product_size"] = len(out.shrunk_product)
    else:
        payload["threshold"] = out.threshold
        payload["sym_size"] = len(out.sym.members)
        payload["sym_members"] = elements_to_json(out.sym.members.elements)
    _emit_json(payload, args.out)
    return 0


def cmd_run(args) -> int:
    spec = load_json(args.instance, "instance")
    cert = stable_neighbourhood(generate(spec), args.k, instance=spec, step_hook=_step_logger(args.trace))
    _emit_json(cert.to_json_dict(), args.out)
    return 0 if cert.verified else 1


def cmd_invariant(args) -> int:
    spec = load_json(args.instance, "instance")
    result = almost_invariant(generate(spec), args.k, instance=spec)
    _emit_json({"instance": spec, **result.as_dict()}, args.out)
    return 0 if result.ok else 1


def cmd_sweep(args) -> int:
    spec = load_json(args.instance, "sweep spec")
    base = spec.get("base")
    grid = spec.get("grid")
    rows = family_sweep(base, grid)
    keys = list(grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(keys) + list(STAT_COLUMNS))
    for point, stats in rows:
        cells = []
        for key in keys:
            node = point
            for part in key.split("."):
                node = node[part]
            cells.append(node if isinstance(node, (int, str)) else json.dumps(node))
        d = stats.as_dict()
        cells += [d[c] if c != "doubling" else fraction_to_str(d[c]) for c in STAT_COLUMNS]
        writer.writerow(cells)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_verify(args) -> int:
    cert = load_json(args.certificate, "certificate")
    spec = load_json(args.instance, "instance")
    report = verify_certificate(cert, generate(spec).elements, instance=spec)
    _emit_json(report.as_dict(), args.out)
    return 0 if report.overall else 1


_HANDLERS = {
    "stats": cmd_stats,
    "sym": cmd_sym,
    "lemma": cmd_lemma,
    "run": cmd_run,
    "invariant": cmd_invariant,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.budget_pairs is not None:
            set_pair_budget(args.budget_pairs)
        return _HANDLERS[args.command](args)
    except PairBudgetError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except InvariantViolation:
        raise  # an inequality the construction proves failed: that is a bug
    except SymGrowthError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    finally:
        set_pair_budget(None)


if __name__ == "__main__":
    sys.exit(main())
