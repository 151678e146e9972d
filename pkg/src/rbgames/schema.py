"""JSON instance and report documents with exact rational serialization.

Rationals travel as integers or "p/q" strings so fixtures stay diffable and
nothing ever rounds. Named cost families (linear, fixed) are expanded into
tables at load time; the core only ever sees tables.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Optional

from .errors import SchemaError
from .matroids import (
    ExplicitBasesMatroid,
    FreeMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .model import (
    Arc,
    ConfigurationProfile,
    CostFunction,
    ExplicitAntichain,
    GameInstance,
    Graph,
    NetworkTerminals,
    PaymentMatrix,
    Player,
    Resource,
    StrategyProfile,
)

SCHEMA_VERSION = "1"


def rational_to_json(value: Fraction):
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def rational_from_json(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"numbers must be integers or 'p/q' strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {value!r}") from exc
    raise SchemaError(f"bad rational {value!r}")


def _require(doc: dict, key: str, context: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{context}: missing field {key!r}")
    return doc[key]


def _cost_to_doc(cost: CostFunction) -> dict:
    return {"table": [rational_to_json(v) for v in cost.values]}


def _cost_from_doc(doc, total_demand: int, context: str) -> CostFunction:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SchemaError(f"{context}: cost must be a one-key object")
    (kind, payload), = doc.items()
    if kind == "table":
        if not isinstance(payload, list):
            raise SchemaError(f"{context}: cost table must be a list")
        return CostFunction(tuple(rational_from_json(v) for v in payload))
    if kind == "linear":
        k = rational_from_json(payload)
        return CostFunction(tuple(k * t for t in range(total_demand + 1)))
    if kind == "fixed":
        k = rational_from_json(payload)
        return CostFunction((Fraction(0),) + (k,) * total_demand)
    raise SchemaError(f"{context}: unknown cost family {kind!r}")


def _space_to_doc(space) -> dict:
    if isinstance(space, UniformMatroid):
        return {
            "kind": "uniform",
            "ground": sorted(space.ground),
            "rank": space.rank_cap,
        }
    if isinstance(space, FreeMatroid):
        return {"kind": "free", "ground": sorted(space.ground)}
    if isinstance(space, PartitionMatroid):
        return {
            "kind": "partition",
            "blocks": [
                {"elements": sorted(block), "rank": cap}
                for block, cap in space.blocks
            ],
        }
    if isinstance(space, GraphicMatroid):
        return {
            "kind": "graphic",
            "edges": [
                {"resource": e, "ends": [u, v]} for e, u, v in space.edges
            ],
        }
    if isinstance(space, ExplicitBasesMatroid):
        return {"kind": "bases", "sets": [sorted(b) for b in space.bases]}
    if isinstance(space, ExplicitAntichain):
        return {"kind": "antichain", "sets": [sorted(s) for s in space.sets]}
    if isinstance(space, NetworkTerminals):
        return {"kind": "terminals", "source": space.source, "target": space.target}
    raise SchemaError(f"cannot serialize strategy space {space!r}")


def _space_from_doc(doc, context: str):
    kind = _require(doc, "kind", context)
    if kind == "uniform":
        return UniformMatroid(
            frozenset(_require(doc, "ground", context)), int(_require(doc, "rank", context))
        )
    if kind == "free":
        return FreeMatroid(frozenset(_require(doc, "ground", context)))
    if kind == "partition":
        blocks = tuple(
            (frozenset(_require(b, "elements", context)), int(_require(b, "rank", context)))
            for b in _require(doc, "blocks", context)
        )
        return PartitionMatroid(blocks)
    if kind == "graphic":
        edges = tuple(
            (str(_require(e, "resource", context)),) + tuple(_require(e, "ends", context))
            for e in _require(doc, "edges", context)
        )
        return GraphicMatroid(edges)
    if kind == "bases":
        return ExplicitBasesMatroid(
            tuple(frozenset(s) for s in _require(doc, "sets", context))
        )
    if kind == "antichain":
        return ExplicitAntichain(
            tuple(frozenset(s) for s in _require(doc, "sets", context))
        )
    if kind == "terminals":
        return NetworkTerminals(
            str(_require(doc, "source", context)), str(_require(doc, "target", context))
        )
    raise SchemaError(f"{context}: unknown strategy space kind {kind!r}")


def instance_to_doc(instance: GameInstance) -> dict:
    doc: dict[str, Any] = {
        "version": SCHEMA_VERSION,
        "resources": [
            {"id": r.id, "cost": _cost_to_doc(r.cost)} for r in instance.resources
        ],
        "players": [
            {
                "id": p.id,
                "demand": p.demand,
                "strategy_space": _space_to_doc(p.strategy_space),
            }
            for p in instance.players
        ],
    }
    if instance.graph is not None:
        doc["graph"] = {
            "nodes": list(instance.graph.nodes),
            "arcs": [
                {"resource": a.resource, "tail": a.tail, "head": a.head}
                for a in instance.graph.arcs
            ],
        }
    return doc


def instance_from_doc(doc: dict) -> GameInstance:
    if not isinstance(doc, dict):
        raise SchemaError("instance document must be a JSON object")
    version = _require(doc, "version", "instance")
    if str(version) != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {version!r}")
    player_docs = _require(doc, "players", "instance")
    resource_docs = _require(doc, "resources", "instance")
    if not isinstance(player_docs, list) or not isinstance(resource_docs, list):
        raise SchemaError("players and resources must be lists")
    try:
        total = sum(int(_require(p, "demand", "player")) for p in player_docs)
    except (TypeError, ValueError) as exc:
        raise SchemaError("player demands must be integers") from exc
    resources = tuple(
        Resource(
            str(_require(r, "id", "resource")),
            _cost_from_doc(_require(r, "cost", "resource"), total, f"resource {r.get('id')}"),
        )
        for r in resource_docs
    )
    players = tuple(
        Player(
            str(_require(p, "id", "player")),
            int(_require(p, "demand", "player")),
            _space_from_doc(
                _require(p, "strategy_space", "player"), f"player {p.get('id')}"
            ),
        )
        for p in player_docs
    )
    graph = None
    if "graph" in doc:
        gdoc = doc["graph"]
        graph = Graph(
            tuple(str(n) for n in _require(gdoc, "nodes", "graph")),
            tuple(
                Arc(
                    str(_require(a, "resource", "arc")),
                    str(_require(a, "tail", "arc")),
                    str(_require(a, "head", "arc")),
                )
                for a in _require(gdoc, "arcs", "graph")
            ),
        )
    return GameInstance(players, resources, graph)


def dump_instance(instance: GameInstance) -> str:
    return json.dumps(instance_to_doc(instance), indent=2) + "\n"


def load_instance_text(text: str) -> GameInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return instance_from_doc(doc)


def instance_digest(instance: GameInstance) -> str:
    canonical = json.dumps(
        instance_to_doc(instance), sort_keys=True, separators=(",", ":")
    )
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def profile_to_doc(instance: GameInstance, profile: ConfigurationProfile) -> dict:
    return {p.id: sorted(profile.of(p.id)) for p in instance.players}


def profile_from_doc(doc, context: str = "profile") -> ConfigurationProfile:
    if not isinstance(doc, dict):
        raise SchemaError(f"{context} must map player ids to resource lists")
    return ConfigurationProfile(
        {str(pid): frozenset(str(r) for r in rids) for pid, rids in doc.items()}
    )


def payments_to_doc(instance: GameInstance, payments: PaymentMatrix) -> dict:
    return {
        p.id: {
            rid: rational_to_json(amount)
            for rid, amount in sorted(payments.entries.get(p.id, {}).items())
        }
        for p in instance.players
    }


def payments_from_doc(doc, context: str = "payments") -> PaymentMatrix:
    if not isinstance(doc, dict):
        raise SchemaError(f"{context} must map player ids to payment objects")
    return PaymentMatrix(
        {
            str(pid): {str(rid): rational_from_json(v) for rid, v in row.items()}
            for pid, row in doc.items()
        }
    )


def strategy_profile_from_doc(doc) -> StrategyProfile:
    profile = profile_from_doc(_require(doc, "profile", "report"))
    payments = payments_from_doc(_require(doc, "payments", "report"))
    return StrategyProfile(profile, payments)
