"""Command-line interface: solve, verify, support, exists, gallery, matroid-check.

Exit codes: 0 success, 1 schema or input errors, 2 unsupported game class,
3 desk-scale capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import gallery
from .convex import pne_by_marginal_pricing, sequential_insertion
from .errors import (
    CapacityError,
    GameError,
    InputError,
    SchemaError,
    UnsupportedClassError,
)
from .matroid_solver import solve_unweighted_matroid
from .matroids import validate_explicit_bases
from .model import GameInstance, StrategyProfile, private_cost, social_cost
from .schema import (
    dump_instance,
    instance_digest,
    load_instance_text,
    payments_to_doc,
    profile_from_doc,
    profile_to_doc,
    rational_to_json,
    strategy_profile_from_doc,
)
from .support import solve_weighted_matroid
from .verify import pne_exists_exhaustive, supportable, verify_pne


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are schema errors, not exit 2
        raise SchemaError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rbgames", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute an equilibrium")
    solve.add_argument("instance", help="instance file path")
    solve.add_argument(
        "--method",
        required=True,
        choices=["matroid", "optimal-support", "marginal-pricing", "sequential"],
    )
    solve.add_argument(
        "--order",
        help="insertion order: 'declaration', 'random', or comma-separated player ids",
    )
    solve.add_argument("--seed", type=int, default=0, help="seed for --order random")
    solve.add_argument("--trace", action="store_true", help="include the iteration trace")

    verify = sub.add_parser("verify", help="audit a report for equilibrium")
    verify.add_argument("instance")
    verify.add_argument("--report", required=True, help="report file with profile and payments")

    support = sub.add_parser("support", help="decide supportability of a profile")
    support.add_argument("instance")
    support.add_argument("--profile", required=True, help="profile file (mapping or report)")

    exists = sub.add_parser("exists", help="exhaustive equilibrium existence search")
    exists.add_argument("instance")

    gal = sub.add_parser("gallery", help="emit a built-in instance")
    gal.add_argument("name", choices=["fig1a", "diamond", "nonmatroid"])
    gal.add_argument("--antichain", help="JSON file with a list of sets (nonmatroid)")
    gal.add_argument("--M", type=int, default=gallery.DEFAULT_PEAK, help="prohibitive cost level")

    check = sub.add_parser("matroid-check", help="test a set family for the exchange axiom")
    check.add_argument("family", help="JSON file: list of sets or {'sets': [...]}")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def _read_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from exc


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _parse_order(instance: GameInstance, spec: Optional[str], seed: int) -> Optional[list[str]]:
    if spec is None or spec == "declaration":
        return None
    if spec == "random":
        ids = [p.id for p in instance.players]
        random.Random(seed).shuffle(ids)
        return ids
    return [token.strip() for token in spec.split(",") if token.strip()]


def _report_doc(
    instance: GameInstance, sp: StrategyProfile, method: str, trace=None, order=None
) -> dict:
    verdict = verify_pne(instance, sp)
    doc = {
        "method": method,
        "instance_digest": instance_digest(instance),
        "profile": profile_to_doc(instance, sp.config),
        "payments": payments_to_doc(instance, sp.payments),
        "player_costs": {
            p.id: _cost_to_json(private_cost(instance, sp, p.id))
            for p in instance.players
        },
        "social_cost": rational_to_json(social_cost(instance, sp.config)),
        "verdict": "pne" if verdict.is_pne else "not-pne",
    }
    if order is not None:
        doc["order"] = list(order)
    if trace is not None:
        doc["trace"] = [
            {
                "iteration": rec.index,
                "cut": sorted(rec.cut),
                "bottleneck": rec.bottleneck,
                "owner": rec.owner,
                "bottleneck_weight": rational_to_json(rec.bottleneck_weight),
                "payment": rational_to_json(rec.payment),
                "updated_marginal": (
                    None
                    if rec.updated_marginal is None
                    else rational_to_json(rec.updated_marginal)
                ),
                "dropped": list(rec.dropped),
            }
            for rec in trace.iterations
        ]
    return doc


def _cost_to_json(value):
    if value == float("inf"):
        return "infinite"
    return rational_to_json(value)


def _cmd_solve(args) -> int:
    instance = load_instance_text(_read(args.instance))
    order = _parse_order(instance, args.order, args.seed)
    trace = None
    if args.method == "matroid":
        sp, trace = solve_unweighted_matroid(instance, keep_trace=args.trace)
    elif args.method == "optimal-support":
        sp = solve_weighted_matroid(instance)
    elif args.method == "marginal-pricing":
        sp = pne_by_marginal_pricing(instance, order)
    else:
        sp = sequential_insertion(instance, order)
    _emit(_report_doc(instance, sp, args.method, trace=trace, order=order))
    return 0


def _cmd_verify(args) -> int:
    instance = load_instance_text(_read(args.instance))
    report = _read_json(args.report)
    digest = report.get("instance_digest")
    if digest is not None and digest != instance_digest(instance):
        raise SchemaError("report digest does not match the instance")
    sp = strategy_profile_from_doc(report)
    verdict = verify_pne(instance, sp)
    _emit(
        {
            "instance_digest": instance_digest(instance),
            "is_pne": verdict.is_pne,
            "players": [
                {
                    "player": audit.player,
                    "current_cost": _cost_to_json(audit.current_cost),
                    "best_response_cost": rational_to_json(audit.best_cost),
                    "best_response": sorted(audit.best_config),
                    "violation": audit.violation,
                }
                for audit in verdict.audits
            ],
        }
    )
    return 0


def _cmd_support(args) -> int:
    instance = load_instance_text(_read(args.instance))
    doc = _read_json(args.profile)
    if isinstance(doc, dict) and "profile" in doc:
        doc = doc["profile"]
    profile = profile_from_doc(doc)
    result = supportable(instance, profile)
    _emit(
        {
            "instance_digest": instance_digest(instance),
            "supportable": result.feasible,
            "payments": (
                payments_to_doc(instance, result.payments) if result.feasible else None
            ),
            "combinations_exhausted": result.combinations_exhausted,
        }
    )
    return 0


def _cmd_exists(args) -> int:
    instance = load_instance_text(_read(args.instance))
    found, witness = pne_exists_exhaustive(instance)
    doc = {
        "instance_digest": instance_digest(instance),
        "pne_exists": found,
        "verdict": "pne-exists" if found else "no-pne",
        "witness": None,
    }
    if found:
        doc["witness"] = {
            "profile": profile_to_doc(instance, witness.config),
            "payments": payments_to_doc(instance, witness.payments),
        }
    _emit(doc)
    return 0


def _cmd_gallery(args) -> int:
    if args.name == "fig1a":
        instance = gallery.fig1a(args.M)
    elif args.name == "diamond":
        instance = gallery.diamond_connection()
    else:
        if not args.antichain:
            raise SchemaError("gallery nonmatroid requires --antichain FILE")
        doc = _read_json(args.antichain)
        if isinstance(doc, dict) and "sets" in doc:
            doc = doc["sets"]
        if not isinstance(doc, list):
            raise SchemaError("antichain file must hold a list of sets")
        instance = gallery.build_no_pne_game(
            [frozenset(str(t) for t in s) for s in doc], args.M
        )
    sys.stdout.write(dump_instance(instance))
    return 0


def _cmd_matroid_check(args) -> int:
    doc = _read_json(args.family)
    if isinstance(doc, dict) and "sets" in doc:
        doc = doc["sets"]
    if not isinstance(doc, list):
        raise SchemaError("family file must hold a list of sets")
    witness = validate_explicit_bases([frozenset(str(t) for t in s) for s in doc])
    if witness is None:
        _emit({"matroid": True, "violation": None})
    else:
        x_set, y_set, x = witness
        _emit(
            {
                "matroid": False,
                "violation": {"X": sorted(x_set), "Y": sorted(y_set), "x": x},
            }
        )
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "support": _cmd_support,
    "exists": _cmd_exists,
    "gallery": _cmd_gallery,
    "matroid-check": _cmd_matroid_check,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UnsupportedClassError as exc:
        print(f"unsupported game class: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except (SchemaError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GameError as exc:  # invariant violations: loud, non-retryable
        print(f"internal error: {exc}", file=sys.stderr)
        raise


def main() -> None:
    sys.exit(run())
