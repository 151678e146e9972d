"""Domain model for resource buying games: costs, players, profiles, payments.

All quantities are exact rationals (`fractions.Fraction`); nothing in this
module ever rounds. A player whose chosen set is not fully paid has private
cost `INFINITE_COST`, a distinguished marker rather than a large number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import InputError
from .matroids import Matroid, MatroidView, is_basis

INFINITE_COST = math.inf

RationalLike = Union[int, str, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    """Exact rational from int, Fraction, or a 'p/q' string; floats are rejected."""
    if isinstance(value, bool):
        raise InputError(f"not an exact rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class CostFunction:
    """Cost table over integer loads 0..max_load, non-decreasing and zero at load 0."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if not vals:
            raise InputError("cost table must at least cover load 0")
        if vals[0] != 0:
            raise InputError("cost at load 0 must be zero")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise InputError("cost table must be non-decreasing")
        object.__setattr__(self, "values", vals)

    @property
    def max_load(self) -> int:
        return len(self.values) - 1

    def __call__(self, load: int) -> Fraction:
        if not isinstance(load, int) or load < 0:
            raise InputError(f"load must be a non-negative integer, got {load!r}")
        if load > self.max_load:
            raise InputError(f"load {load} exceeds the cost table (max {self.max_load})")
        return self.values[load]

    def marginal(self, load: int) -> Fraction:
        """Unit-step increment c(load + 1) - c(load)."""
        return self(load + 1) - self(load)


def classify_marginal(cost: CostFunction) -> str:
    """Classify unit-step marginals: 'nonincreasing', 'nondecreasing', 'both', or 'neither'.

    Unit steps suffice on the integer grid: any wider-step comparison telescopes
    into consecutive unit-step comparisons.
    """
    diffs = [cost.values[i + 1] - cost.values[i] for i in range(cost.max_load)]
    noninc = all(a >= b for a, b in zip(diffs, diffs[1:]))
    nondec = all(a <= b for a, b in zip(diffs, diffs[1:]))
    if noninc and nondec:
        return "both"
    if noninc:
        return "nonincreasing"
    if nondec:
        return "nondecreasing"
    return "neither"


@dataclass(frozen=True)
class Resource:
    id: str
    cost: CostFunction


@dataclass(frozen=True)
class ExplicitAntichain:
    """Strategy space given by listing the allowed sets; pairwise incomparable."""

    sets: tuple[frozenset[str], ...]

    def __post_init__(self):
        family = sorted({frozenset(s) for s in self.sets}, key=sorted)
        if not family:
            raise InputError("antichain must contain at least one set")
        for s in family:
            if not s:
                raise InputError("antichain sets must be non-empty")
        for a in family:
            for b in family:
                if a != b and a <= b:
                    raise InputError(
                        f"not an antichain: {sorted(a)} is contained in {sorted(b)}"
                    )
        object.__setattr__(self, "sets", tuple(family))

    @property
    def elements(self) -> frozenset[str]:
        return frozenset().union(*self.sets)


@dataclass(frozen=True)
class NetworkTerminals:
    """Strategy space: simple directed paths from `source` to `target`."""

    source: str
    target: str

    def __post_init__(self):
        if self.source == self.target:
            raise InputError("source and target must differ")


StrategySpace = Union[Matroid, ExplicitAntichain, NetworkTerminals]


@dataclass(frozen=True)
class Player:
    id: str
    demand: int
    strategy_space: StrategySpace

    def __post_init__(self):
        if not isinstance(self.demand, int) or self.demand < 1:
            raise InputError(f"player {self.id}: demand must be a positive integer")


@dataclass(frozen=True)
class Arc:
    resource: str
    tail: str
    head: str


@dataclass(frozen=True)
class Graph:
    """Directed graph whose arcs are bound one-to-one to resources."""

    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate node names")
        node_set = set(self.nodes)
        seen = set()
        for arc in self.arcs:
            if arc.tail not in node_set or arc.head not in node_set:
                raise InputError(f"arc {arc.resource} references unknown nodes")
            if arc.resource in seen:
                raise InputError(f"resource {arc.resource} bound to more than one arc")
            seen.add(arc.resource)

    @property
    def node_order(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    def out_arcs(self, node: str) -> list[Arc]:
        return [a for a in self.arcs if a.tail == node]

    def in_arcs(self, node: str) -> list[Arc]:
        return [a for a in self.arcs if a.head == node]

    def arc_of(self, resource: str) -> Arc:
        for a in self.arcs:
            if a.resource == resource:
                return a
        raise InputError(f"no arc bound to resource {resource}")

    def reachable(self, source: str, target: str) -> bool:
        frontier = [source]
        seen = {source}
        while frontier:
            node = frontier.pop()
            if node == target:
                return True
            for arc in self.arcs:
                if arc.tail == node and arc.head not in seen:
                    seen.add(arc.head)
                    frontier.append(arc.head)
        return False


@dataclass(frozen=True)
class GameInstance:
    players: tuple[Player, ...]
    resources: tuple[Resource, ...]
    graph: Optional[Graph] = None

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "resources", tuple(self.resources))
        ids = [r.id for r in self.resources]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate resource ids")
        pids = [p.id for p in self.players]
        if len(set(pids)) != len(pids):
            raise InputError("duplicate player ids")
        if not self.players:
            raise InputError("instance needs at least one player")
        known = set(ids)
        total = sum(p.demand for p in self.players)
        for r in self.resources:
            if r.cost.max_load < total:
                raise InputError(
                    f"cost table of {r.id} covers loads up to {r.cost.max_load}, "
                    f"but total demand is {total}"
                )
        if self.graph is not None:
            for arc in self.graph.arcs:
                if arc.resource not in known:
                    raise InputError(f"graph arc bound to unknown resource {arc.resource}")
        for p in self.players:
            space = p.strategy_space
            if isinstance(space, Matroid):
                if not space.ground <= known:
                    raise InputError(f"player {p.id} references unknown resources")
            elif isinstance(space, ExplicitAntichain):
                if not space.elements <= known:
                    raise InputError(f"player {p.id} references unknown resources")
            elif isinstance(space, NetworkTerminals):
                if self.graph is None:
                    raise InputError(f"player {p.id} needs a graph section")
                order = self.graph.node_order
                if space.source not in order or space.target not in order:
                    raise InputError(f"player {p.id} terminals missing from the graph")
                if not self.graph.reachable(space.source, space.target):
                    raise InputError(
                        f"player {p.id}: no route from {space.source} to {space.target}"
                    )
            else:
                raise InputError(f"player {p.id} has an unknown strategy space kind")

    @property
    def total_demand(self) -> int:
        return sum(p.demand for p in self.players)

    @property
    def resource_order(self) -> dict[str, int]:
        return {r.id: i for i, r in enumerate(self.resources)}

    def resource(self, resource_id: str) -> Resource:
        for r in self.resources:
            if r.id == resource_id:
                return r
        raise InputError(f"unknown resource {resource_id!r}")

    def cost(self, resource_id: str) -> CostFunction:
        return self.resource(resource_id).cost

    def player(self, player_id: str) -> Player:
        for p in self.players:
            if p.id == player_id:
                return p
        raise InputError(f"unknown player {player_id!r}")


@dataclass(frozen=True)
class ConfigurationProfile:
    """One chosen resource set per player."""

    chosen: Mapping[str, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(
            self, "chosen", {pid: frozenset(s) for pid, s in dict(self.chosen).items()}
        )

    def of(self, player_id: str) -> frozenset[str]:
        try:
            return self.chosen[player_id]
        except KeyError:
            raise InputError(f"profile has no entry for player {player_id!r}") from None

    def __eq__(self, other):
        return isinstance(other, ConfigurationProfile) and self.chosen == other.chosen


@dataclass(frozen=True)
class PaymentMatrix:
    """Per-(player, resource) non-negative payments; zero entries are not stored."""

    entries: Mapping[str, Mapping[str, Fraction]]

    def __post_init__(self):
        clean: dict[str, dict[str, Fraction]] = {}
        for pid, row in dict(self.entries).items():
            new_row = {}
            for rid, amount in dict(row).items():
                amount = as_fraction(amount)
                if amount < 0:
                    raise InputError(f"negative payment p[{pid}][{rid}] = {amount}")
                if amount != 0:
                    new_row[rid] = amount
            clean[pid] = new_row
        object.__setattr__(self, "entries", clean)

    def amount(self, player_id: str, resource_id: str) -> Fraction:
        return self.entries.get(player_id, {}).get(resource_id, Fraction(0))

    def total_on(self, resource_id: str) -> Fraction:
        return sum(
            (row.get(resource_id, Fraction(0)) for row in self.entries.values()),
            Fraction(0),
        )

    def paid_by(self, player_id: str) -> Fraction:
        return sum(self.entries.get(player_id, {}).values(), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, PaymentMatrix) and self.entries == other.entries


@dataclass(frozen=True)
class StrategyProfile:
    """A configuration profile together with supporting payments."""

    config: ConfigurationProfile
    payments: PaymentMatrix

    def __post_init__(self):
        for pid, row in self.payments.entries.items():
            chosen = self.config.chosen.get(pid, frozenset())
            outside = set(row) - chosen
            if outside:
                raise InputError(
                    f"player {pid} pays for resources outside the chosen set: {sorted(outside)}"
                )


def load(instance: GameInstance, profile: ConfigurationProfile, resource_id: str) -> int:
    """Total demand on a resource under a configuration profile."""
    instance.resource(resource_id)
    total = 0
    for p in instance.players:
        if resource_id in profile.of(p.id):
            total += p.demand
    return total


def all_loads(instance: GameInstance, profile: ConfigurationProfile) -> dict[str, int]:
    loads = {r.id: 0 for r in instance.resources}
    for p in instance.players:
        for rid in profile.of(p.id):
            if rid not in loads:
                raise InputError(f"profile references unknown resource {rid!r}")
            loads[rid] += p.demand
    return loads


def social_cost(instance: GameInstance, profile: ConfigurationProfile) -> Fraction:
    """Sum of per-resource costs at the profile's loads."""
    loads = all_loads(instance, profile)
    return sum((r.cost(loads[r.id]) for r in instance.resources), Fraction(0))


def private_cost(instance: GameInstance, sp: StrategyProfile, player_id: str):
    """Player's total payment if every chosen resource is fully paid, else INFINITE_COST."""
    instance.player(player_id)
    loads = all_loads(instance, sp.config)
    for rid in sp.config.of(player_id):
        if sp.payments.total_on(rid) < instance.cost(rid)(loads[rid]):
            return INFINITE_COST
    return sp.payments.paid_by(player_id)


def validate_profile(instance: GameInstance, profile: ConfigurationProfile) -> None:
    """Check that every player's chosen set belongs to her strategy space."""
    missing = {p.id for p in instance.players} - set(profile.chosen)
    if missing:
        raise InputError(f"profile is missing players: {sorted(missing)}")
    extra = set(profile.chosen) - {p.id for p in instance.players}
    if extra:
        raise InputError(f"profile has unknown players: {sorted(extra)}")
    for p in instance.players:
        chosen = profile.of(p.id)
        space = p.strategy_space
        if isinstance(space, Matroid):
            if not is_basis(MatroidView(space), chosen):
                raise InputError(f"player {p.id}: {sorted(chosen)} is not a basis")
        elif isinstance(space, ExplicitAntichain):
            if chosen not in space.sets:
                raise InputError(f"player {p.id}: {sorted(chosen)} is not an allowed set")
        else:
            if not _is_simple_path(instance.graph, chosen, space.source, space.target):
                raise InputError(
                    f"player {p.id}: {sorted(chosen)} is not a simple "
                    f"{space.source}->{space.target} path"
                )


def _is_simple_path(graph: Graph, resources: frozenset[str], source: str, target: str) -> bool:
    try:
        arcs = {graph.arc_of(r).tail: graph.arc_of(r) for r in resources}
    except InputError:
        return False
    if len(arcs) != len(resources):
        return False
    node = source
    visited = {source}
    used = 0
    while node != target:
        arc = arcs.get(node)
        if arc is None or arc.head in visited:
            return False
        visited.add(arc.head)
        node = arc.head
        used += 1
    return used == len(resources)
