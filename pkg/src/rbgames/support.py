"""Which basis profiles admit equilibrium payments, and the optimum-backed solver.

A resource is *fixed* if some player carries it in every basis; fixed
resources are billed to one such player in full. Every other resource must
have its cost covered by the users' cheapest single-exchange escape costs;
when that holds, splitting the cost proportionally to those escape costs
yields equilibrium payments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional

from .errors import (
    CapacityError,
    InputError,
    InvariantViolationError,
    UnsupportedClassError,
)
from .matroids import Matroid, MatroidView, exchange_set, is_basis, is_coloop
from .model import (
    ConfigurationProfile,
    ExplicitAntichain,
    GameInstance,
    PaymentMatrix,
    StrategyProfile,
    all_loads,
    classify_marginal,
    social_cost,
)
from .spaces import enumerate_strategies

PROFILE_CAP = 1_000_000


@dataclass(frozen=True)
class FixedSet:
    """Resources forced into some player's every configuration, with a witness each."""

    elements: frozenset[str]
    witnesses: Mapping[str, str]


@dataclass(frozen=True)
class DeltaEntry:
    value: Fraction
    partner: str


@dataclass(frozen=True)
class DeltaTable:
    """Cheapest single-exchange escape cost per (user, non-fixed resource)."""

    entries: Mapping[tuple[str, str], DeltaEntry]

    def value(self, player_id: str, resource_id: str) -> Fraction:
        return self.entries[(player_id, resource_id)].value

    def partner(self, player_id: str, resource_id: str) -> str:
        return self.entries[(player_id, resource_id)].partner


def fixed_elements(instance: GameInstance) -> FixedSet:
    """Resources that lie in every configuration of at least one player.

    For matroid spaces this is the coloop test; for explicit antichains it is
    membership in the intersection of all allowed sets.
    """
    witnesses: dict[str, str] = {}
    for r in instance.resources:
        for p in instance.players:
            space = p.strategy_space
            if isinstance(space, Matroid):
                if r.id in space.ground and is_coloop(space, r.id):
                    witnesses[r.id] = p.id
                    break
            elif isinstance(space, ExplicitAntichain):
                if all(r.id in s for s in space.sets):
                    witnesses[r.id] = p.id
                    break
            else:
                raise InputError(
                    f"player {p.id}: fixed-element analysis needs a matroid or "
                    "explicit strategy space"
                )
    return FixedSet(frozenset(witnesses), dict(witnesses))


def _require_matroids(instance: GameInstance) -> None:
    for p in instance.players:
        if not isinstance(p.strategy_space, Matroid):
            raise InputError(f"player {p.id} does not have a matroid strategy space")


def delta_table(instance: GameInstance, profile: ConfigurationProfile) -> DeltaTable:
    """Cheapest escape cost for every user of every non-fixed resource.

    The escape cost of player i on e is the smallest marginal price of an
    alternative f with basis - e + f still a basis, evaluated at the loads the
    switch would create. Well-defined: a user of a non-fixed e always has a
    non-empty exchange set.
    """
    _require_matroids(instance)
    for p in instance.players:
        if not is_basis(MatroidView(p.strategy_space), profile.of(p.id)):
            raise InputError(f"player {p.id}: chosen set is not a basis")
    fixed = fixed_elements(instance)
    loads = all_loads(instance, profile)
    order = instance.resource_order
    entries: dict[tuple[str, str], DeltaEntry] = {}
    for r in instance.resources:
        if r.id in fixed.elements:
            continue
        for p in instance.players:
            basis = profile.of(p.id)
            if r.id not in basis:
                continue
            partners = exchange_set(p.strategy_space, basis, r.id)
            if not partners:
                raise InvariantViolationError(
                    f"non-fixed resource {r.id} has no exchange for player {p.id}"
                )
            best: Optional[DeltaEntry] = None
            for f in sorted(partners, key=lambda e: order[e]):
                cost = instance.cost(f)
                value = cost(loads[f] + p.demand) - cost(loads[f])
                if best is None or value < best.value:
                    best = DeltaEntry(value, f)
            entries[(p.id, r.id)] = best
    return DeltaTable(entries)


def check_supportable_matroid(instance: GameInstance, profile: ConfigurationProfile) -> bool:
    """True iff each non-fixed resource's cost is at most its users' summed escape costs."""
    table = delta_table(instance, profile)
    fixed = fixed_elements(instance)
    loads = all_loads(instance, profile)
    for r in instance.resources:
        if r.id in fixed.elements:
            continue
        users = [p for p in instance.players if r.id in profile.of(p.id)]
        slack = sum((table.value(p.id, r.id) for p in users), Fraction(0))
        if r.cost(loads[r.id]) > slack:
            return False
    return True


def construct_payments(instance: GameInstance, profile: ConfigurationProfile) -> PaymentMatrix:
    """Equilibrium payments for a supportable basis profile.

    Fixed resources are billed in full to their earliest-declared witness;
    every other used resource is split among its users proportionally to their
    escape costs (all zero escape costs force a zero-cost resource, paid by
    nobody).
    """
    if not check_supportable_matroid(instance, profile):
        raise InputError("profile is not supportable; no payment vector exists")
    table = delta_table(instance, profile)
    fixed = fixed_elements(instance)
    loads = all_loads(instance, profile)
    payments: dict[str, dict[str, Fraction]] = {p.id: {} for p in instance.players}
    for r in instance.resources:
        total = r.cost(loads[r.id])
        if total == 0:
            continue
        if r.id in fixed.elements:
            payments[fixed.witnesses[r.id]][r.id] = total
            continue
        users = [p.id for p in instance.players if r.id in profile.of(p.id)]
        denom = sum((table.value(pid, r.id) for pid in users), Fraction(0))
        if denom == 0:
            raise InvariantViolationError(
                f"resource {r.id} costs {total} but all escape costs are zero"
            )
        for pid in users:
            share = table.value(pid, r.id) / denom * total
            if share != 0:
                payments[pid][r.id] = share
    return PaymentMatrix(payments)


def social_optimum_bruteforce(instance: GameInstance) -> ConfigurationProfile:
    """Cheapest configuration profile by exhaustive enumeration.

    Ties resolve to the lexicographically first profile in (player declaration,
    canonical strategy order). Desk scale only.
    """
    options = [enumerate_strategies(instance, p) for p in instance.players]
    count = 1
    for opts in options:
        count *= len(opts)
        if count > PROFILE_CAP:
            raise CapacityError(
                f"profile space exceeds {PROFILE_CAP} configurations; "
                "exhaustive optimization refused"
            )
    ids = [p.id for p in instance.players]
    best_cost: Optional[Fraction] = None
    best: Optional[ConfigurationProfile] = None
    for combo in product(*options):
        profile = ConfigurationProfile(dict(zip(ids, combo)))
        cost = social_cost(instance, profile)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = profile
    return best


def solve_weighted_matroid(instance: GameInstance) -> StrategyProfile:
    """Equilibrium on a social optimum for matroid games with economies of scale.

    Finds a brute-force optimum and pays it via `construct_payments`; with
    non-increasing marginals the optimum is always supportable, so a failed
    support check is surfaced as an internal error rather than patched over.
    """
    _require_matroids(instance)
    for r in instance.resources:
        kind = classify_marginal(r.cost)
        if kind not in ("nonincreasing", "both"):
            raise UnsupportedClassError(
                f"resource {r.id} has {kind} marginals; non-increasing marginals required"
            )
    optimum = social_optimum_bruteforce(instance)
    if not check_supportable_matroid(instance, optimum):
        raise InvariantViolationError(
            "socially optimal profile is not supportable despite non-increasing "
            "marginals; this contradicts the existence guarantee"
        )
    return StrategyProfile(optimum, construct_payments(instance, optimum))
