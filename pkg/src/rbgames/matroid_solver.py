"""Equilibrium computation for unit-demand matroid games with economies of scale.

The solver repeatedly finds, over all players' current minors, an
inclusion-minimal cut whose cheapest element is as expensive as possible. The
owning player buys that bottleneck element at its current marginal price and
contracts it; everyone else has the remaining cut elements deleted. Bottleneck
prices are checked to be non-increasing across iterations, every deletion must
leave a basis available, and per-resource payments stay exactly
budget-balanced; a violation of any of these aborts with an internal error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvariantViolationError, UnsupportedClassError
from .matroids import Matroid, MatroidView, contract, delete, max_bottleneck_min_cut
from .model import (
    ConfigurationProfile,
    GameInstance,
    PaymentMatrix,
    StrategyProfile,
    classify_marginal,
)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    cut: frozenset[str]
    bottleneck: str
    owner: str
    bottleneck_weight: Fraction
    payment: Fraction
    updated_marginal: Optional[Fraction]
    dropped: tuple[str, ...]


@dataclass(frozen=True)
class AlgorithmTrace:
    iterations: tuple[IterationRecord, ...]


def solve_unweighted_matroid(
    instance: GameInstance, *, keep_trace: bool = False
) -> tuple[StrategyProfile, Optional[AlgorithmTrace]]:
    """Compute an equilibrium for a unit-demand matroid game.

    Requires unit demands, matroid strategy spaces, and cost tables whose
    marginals are non-increasing (linear tables count). Returns the profile of
    bases with its exactly budget-balanced payments, plus the iteration trace
    when requested.
    """
    for p in instance.players:
        if p.demand != 1:
            raise UnsupportedClassError(
                f"player {p.id} has demand {p.demand}; this solver handles unit demands only"
            )
        if not isinstance(p.strategy_space, Matroid):
            raise UnsupportedClassError(
                f"player {p.id} does not have a matroid strategy space"
            )
    for r in instance.resources:
        kind = classify_marginal(r.cost)
        if kind not in ("nonincreasing", "both"):
            raise UnsupportedClassError(
                f"resource {r.id} has {kind} marginals; non-increasing marginals required"
            )

    tie_order = [r.id for r in instance.resources]
    views: dict[str, MatroidView] = {}
    chosen: dict[str, set[str]] = {}
    payments: dict[str, dict[str, Fraction]] = {}
    active: list[str] = []
    for p in instance.players:
        view = MatroidView(p.strategy_space)
        views[p.id] = view
        chosen[p.id] = set()
        payments[p.id] = {}
        if view.full_rank() > 0:
            active.append(p.id)

    loads: dict[str, int] = {r.id: 0 for r in instance.resources}
    marginal: dict[str, Optional[Fraction]] = {
        r.id: r.cost.marginal(0) for r in instance.resources
    }

    records: list[IterationRecord] = []
    last_weight: Optional[Fraction] = None
    index = 0
    while active:
        index += 1
        cert = max_bottleneck_min_cut(
            {pid: views[pid] for pid in active}, marginal, tie_order
        )
        if cert is None:
            raise InvariantViolationError("active player left without any cut")
        if last_weight is not None and cert.bottleneck_weight > last_weight:
            raise InvariantViolationError(
                f"bottleneck price increased: {last_weight} -> {cert.bottleneck_weight}"
            )
        last_weight = cert.bottleneck_weight
        buyer = cert.owner
        element = cert.bottleneck

        price = marginal[element]
        payments[buyer][element] = price
        chosen[buyer].add(element)
        loads[element] += 1
        cost = instance.cost(element)
        new_marginal = (
            cost.marginal(loads[element]) if loads[element] < cost.max_load else None
        )
        marginal[element] = new_marginal

        views[buyer] = contract(views[buyer], element)
        dropped: list[str] = []
        if views[buyer].full_rank() == 0:
            active.remove(buyer)
            dropped.append(buyer)

        leftovers = cert.cut - {element}
        for pid in active:
            if pid == buyer:
                continue
            slice_ = leftovers & views[pid].ground
            if not slice_:
                continue
            before = views[pid].full_rank()
            views[pid] = delete(views[pid], slice_)
            if views[pid].full_rank() != before:
                raise InvariantViolationError(
                    f"deleting {sorted(slice_)} destroyed every basis of player {pid}"
                )

        for rid, current in loads.items():
            paid = sum(
                (payments[pid].get(rid, Fraction(0)) for pid in payments), Fraction(0)
            )
            if paid != instance.cost(rid)(current):
                raise InvariantViolationError(
                    f"budget balance broken on {rid}: paid {paid}, "
                    f"cost {instance.cost(rid)(current)}"
                )

        if keep_trace:
            records.append(
                IterationRecord(
                    index=index,
                    cut=cert.cut,
                    bottleneck=element,
                    owner=buyer,
                    bottleneck_weight=cert.bottleneck_weight,
                    payment=price,
                    updated_marginal=new_marginal,
                    dropped=tuple(dropped),
                )
            )

    config = ConfigurationProfile({pid: frozenset(s) for pid, s in chosen.items()})
    profile = StrategyProfile(config, PaymentMatrix(payments))
    trace = AlgorithmTrace(tuple(records)) if keep_trace else None
    return profile, trace
