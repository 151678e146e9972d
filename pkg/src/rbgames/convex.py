"""Order-based marginal pricing and one-pass insertion for convex congestion costs.

With non-decreasing marginals, charging each player exactly the cost increment
her demand causes yields an equilibrium on any socially optimal profile, and
inserting players one at a time at their current best response is an
equilibrium as well: earlier payments never change and later prices never
drop below what an inserted player already faced.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError, UnsupportedClassError
from .matroids import Matroid, min_weight_basis
from .model import (
    ConfigurationProfile,
    ExplicitAntichain,
    GameInstance,
    NetworkTerminals,
    PaymentMatrix,
    StrategyProfile,
    all_loads,
    classify_marginal,
)
from .spaces import lex_min_path
from .support import social_optimum_bruteforce


def normalize_order(instance: GameInstance, order: Optional[Sequence[str]]) -> tuple[str, ...]:
    """Validate an insertion order as a permutation of the players; default declaration order."""
    ids = [p.id for p in instance.players]
    if order is None:
        return tuple(ids)
    order = tuple(order)
    if sorted(order) != sorted(ids):
        raise InputError(f"order {list(order)} is not a permutation of the players")
    return order


def _require_convex(instance: GameInstance) -> None:
    for r in instance.resources:
        kind = classify_marginal(r.cost)
        if kind not in ("nondecreasing", "both"):
            raise UnsupportedClassError(
                f"resource {r.id} has {kind} marginals; non-decreasing marginals required"
            )


def marginal_cost_payments(
    instance: GameInstance,
    profile: ConfigurationProfile,
    order: Optional[Sequence[str]] = None,
) -> PaymentMatrix:
    """Charge each user of a resource the increment her demand adds, in order.

    Payments telescope to the full cost on every resource.
    """
    sigma = normalize_order(instance, order)
    demand = {p.id: p.demand for p in instance.players}
    payments: dict[str, dict[str, Fraction]] = {p.id: {} for p in instance.players}
    for r in instance.resources:
        cumulative = 0
        for pid in sigma:
            if r.id not in profile.of(pid):
                continue
            increment = r.cost(cumulative + demand[pid]) - r.cost(cumulative)
            if increment != 0:
                payments[pid][r.id] = increment
            cumulative += demand[pid]
    return PaymentMatrix(payments)


def pne_by_marginal_pricing(
    instance: GameInstance, order: Optional[Sequence[str]] = None
) -> StrategyProfile:
    """Equilibrium built on a brute-force social optimum via marginal pricing."""
    _require_convex(instance)
    optimum = social_optimum_bruteforce(instance)
    return StrategyProfile(optimum, marginal_cost_payments(instance, optimum, order))


def _marginal_weights(instance: GameInstance, loads: Mapping[str, int], demand: int) -> dict[str, Fraction]:
    weights = {}
    for r in instance.resources:
        w = r.cost(loads[r.id] + demand) - r.cost(loads[r.id])
        if w < 0:
            raise InputError(f"negative marginal on {r.id}; corrupt cost table")
        weights[r.id] = w
    return weights


def _cheapest_configuration(
    instance: GameInstance, player, weights: Mapping[str, Fraction]
) -> frozenset[str]:
    space = player.strategy_space
    if isinstance(space, NetworkTerminals):
        config, _ = lex_min_path(instance.graph, space.source, space.target, weights)
        return config
    if isinstance(space, Matroid):
        return min_weight_basis(space, weights)
    assert isinstance(space, ExplicitAntichain)
    best = None
    for option in space.sets:
        cost = sum((weights[e] for e in option), Fraction(0))
        if best is None or cost < best[1]:
            best = (option, cost)
    return best[0]


def sequential_insertion(
    instance: GameInstance, order: Optional[Sequence[str]] = None
) -> StrategyProfile:
    """Insert players one after the other at their current cheapest configuration.

    Each player pays exactly the marginal prices she faces on insertion;
    earlier players' payments never change.
    """
    _require_convex(instance)
    sigma = normalize_order(instance, order)
    loads = {r.id: 0 for r in instance.resources}
    chosen: dict[str, frozenset[str]] = {}
    payments: dict[str, dict[str, Fraction]] = {}
    for pid in sigma:
        player = instance.player(pid)
        weights = _marginal_weights(instance, loads, player.demand)
        config = _cheapest_configuration(instance, player, weights)
        chosen[pid] = config
        payments[pid] = {e: weights[e] for e in config if weights[e] != 0}
        for e in config:
            loads[e] += player.demand
    return StrategyProfile(ConfigurationProfile(chosen), PaymentMatrix(payments))


def network_best_response(
    instance: GameInstance, player_id: str, loads: Mapping[str, int]
) -> frozenset[str]:
    """Min-marginal-cost path for one network player against fixed loads."""
    player = instance.player(player_id)
    space = player.strategy_space
    if not isinstance(space, NetworkTerminals):
        raise InputError(f"player {player_id} is not a network player")
    full = {r.id: int(loads.get(r.id, 0)) for r in instance.resources}
    for rid, value in full.items():
        if value < 0:
            raise InputError(f"negative load on {rid}")
    weights = _marginal_weights(instance, full, player.demand)
    config, _ = lex_min_path(instance.graph, space.source, space.target, weights)
    return config
