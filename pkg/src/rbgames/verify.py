"""Exact equilibrium audits: best responses, verification, and supportability.

A deviating player pays, on each resource of the new set, whatever the
others' standing payments leave uncovered at the resulting load. Only the
deviator's own set must end up bought; other players' sets are their problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Union

from . import fm
from .errors import CapacityError, InputError, InvariantViolationError
from .matroids import Matroid, MatroidView, exchange_set
from .model import (
    ConfigurationProfile,
    GameInstance,
    INFINITE_COST,
    NetworkTerminals,
    PaymentMatrix,
    StrategyProfile,
    all_loads,
    private_cost,
    validate_profile,
)
from .spaces import enumerate_strategies, lex_min_path

SUPPORT_MAX_PLAYERS = 3
SUPPORT_MAX_STRATEGIES = 6
SUPPORT_MAX_RESOURCES = 10
EXISTS_PROFILE_CAP = 5000


@dataclass(frozen=True)
class PlayerAudit:
    player: str
    current_cost: Union[Fraction, float]
    best_cost: Fraction
    best_config: frozenset[str]
    violation: bool


@dataclass(frozen=True)
class VerificationReport:
    audits: tuple[PlayerAudit, ...]
    is_pne: bool

    def audit(self, player_id: str) -> PlayerAudit:
        for a in self.audits:
            if a.player == player_id:
                return a
        raise InputError(f"no audit for player {player_id!r}")


@dataclass(frozen=True)
class SupportabilityResult:
    """Feasible payments, or the number of ruled-out disjunct combinations."""

    payments: Optional[PaymentMatrix]
    combinations_exhausted: int

    @property
    def feasible(self) -> bool:
        return self.payments is not None


def _residual_weights(instance: GameInstance, sp: StrategyProfile, player_id: str) -> dict[str, Fraction]:
    """Per-resource price the player would face on a set containing that resource."""
    me = instance.player(player_id)
    loads = all_loads(instance, sp.config)
    weights = {}
    for r in instance.resources:
        base = loads[r.id]
        if r.id in sp.config.of(player_id):
            base -= me.demand
        covered = sp.payments.total_on(r.id) - sp.payments.amount(player_id, r.id)
        weights[r.id] = max(Fraction(0), r.cost(base + me.demand) - covered)
    return weights


def best_response(
    instance: GameInstance, sp: StrategyProfile, player_id: str
) -> tuple[frozenset[str], Fraction]:
    """Cheapest deviation for one player against the others' standing payments.

    Ties resolve to the lexicographically first configuration (shortest-path
    tie rules for network players).
    """
    player = instance.player(player_id)
    weights = _residual_weights(instance, sp, player_id)
    if isinstance(player.strategy_space, NetworkTerminals):
        space = player.strategy_space
        return lex_min_path(instance.graph, space.source, space.target, weights)
    best: Optional[tuple[frozenset[str], Fraction]] = None
    for option in enumerate_strategies(instance, player):
        cost = sum((weights[e] for e in option), Fraction(0))
        if best is None or cost < best[1]:
            best = (option, cost)
    return best


def verify_pne(instance: GameInstance, sp: StrategyProfile, mode: str = "auto") -> VerificationReport:
    """Audit every player's incentive to deviate.

    `mode`: "general" enumerates each player's strategy space, "matroid" checks
    only one-element basis exchanges (valid for matroid games with exactly
    budget-balanced payments; the verdict provably agrees with the general
    audit there), "auto" picks the matroid path when its preconditions hold.
    """
    validate_profile(instance, sp.config)
    if mode not in ("auto", "general", "matroid"):
        raise InputError(f"unknown verification mode {mode!r}")
    if mode == "matroid" and not _exchange_audit_applies(instance, sp):
        raise InputError(
            "matroid verification needs matroid spaces and exact budget balance"
        )
    use_fast = mode == "matroid" or (mode == "auto" and _exchange_audit_applies(instance, sp))
    audits = []
    for p in instance.players:
        if use_fast:
            audits.append(_exchange_audit(instance, sp, p.id))
        else:
            current = private_cost(instance, sp, p.id)
            config, cost = best_response(instance, sp, p.id)
            audits.append(PlayerAudit(p.id, current, cost, config, cost < current))
    return VerificationReport(tuple(audits), not any(a.violation for a in audits))


def _exchange_audit_applies(instance: GameInstance, sp: StrategyProfile) -> bool:
    if not all(isinstance(p.strategy_space, Matroid) for p in instance.players):
        return False
    loads = all_loads(instance, sp.config)
    return all(
        sp.payments.total_on(r.id) == r.cost(loads[r.id]) for r in instance.resources
    )


def _exchange_audit(instance: GameInstance, sp: StrategyProfile, player_id: str) -> PlayerAudit:
    # Under exact budget balance, keeping a resource costs exactly the standing
    # payment, so single exchanges decide optimality; the reported deviation is
    # the best exchange, which suffices as an improving witness.
    player = instance.player(player_id)
    basis = sp.config.of(player_id)
    loads = all_loads(instance, sp.config)
    current = sp.payments.paid_by(player_id)
    best_gain = Fraction(0)
    best_config = basis
    for g in sorted(basis):
        paid = sp.payments.amount(player_id, g)
        if paid == 0:
            continue
        for f in sorted(exchange_set(player.strategy_space, basis, g)):
            covered = sp.payments.total_on(f)
            price = max(
                Fraction(0), instance.cost(f)(loads[f] + player.demand) - covered
            )
            gain = paid - price
            if gain > best_gain:
                best_gain = gain
                best_config = basis - {g} | {f}
    return PlayerAudit(
        player_id, current, current - best_gain, best_config, best_gain > 0
    )


def supportable(instance: GameInstance, profile: ConfigurationProfile) -> SupportabilityResult:
    """Decide exactly whether payments exist that make `profile` an equilibrium.

    Payments must be non-negative with support in the profile and cover each
    used resource exactly (any overpayment could be reduced unilaterally, so
    no equilibrium is lost by requiring equality). Each deviation constraint
    "own total <= sum of max(0, uncovered price)" is split into disjuncts over
    subsets of the deviation set; one linear system per disjunct combination is
    decided exactly, depth-first in a fixed order, stopping at the first
    feasible combination.
    """
    if len(instance.players) > SUPPORT_MAX_PLAYERS:
        raise CapacityError(
            f"supportability search handles at most {SUPPORT_MAX_PLAYERS} players"
        )
    if len(instance.resources) > SUPPORT_MAX_RESOURCES:
        raise CapacityError(
            f"supportability search handles at most {SUPPORT_MAX_RESOURCES} resources"
        )
    strategies = {}
    for p in instance.players:
        options = enumerate_strategies(instance, p)
        if len(options) > SUPPORT_MAX_STRATEGIES:
            raise CapacityError(
                f"player {p.id} has more than {SUPPORT_MAX_STRATEGIES} strategies"
            )
        strategies[p.id] = options
    validate_profile(instance, profile)

    loads = all_loads(instance, profile)
    variables = [
        (p.id, e) for p in instance.players for e in sorted(profile.of(p.id))
    ]
    nonneg = [({v: Fraction(-1)}, Fraction(0)) for v in variables]
    equalities = []
    for r in instance.resources:
        users = [p.id for p in instance.players if r.id in profile.of(p.id)]
        if users:
            equalities.append(
                ({(pid, r.id): Fraction(1) for pid in users}, r.cost(loads[r.id]))
            )

    constraints: list[list[fm.Row]] = []
    for p in instance.players:
        own = profile.of(p.id)
        own_vars = {(p.id, e): Fraction(1) for e in own}
        for option in strategies[p.id]:
            if option == own:
                continue  # tight under the per-resource equalities; never binding
            mandatory = Fraction(0)
            optional = []
            for e in sorted(option):
                base = loads[e] - (p.demand if e in own else 0)
                price = instance.cost(e)(base + p.demand)
                others = [
                    (q.id, e)
                    for q in instance.players
                    if q.id != p.id and e in profile.of(q.id)
                ]
                if price == 0:
                    continue  # including a zero-price term can only tighten the bound
                if not others:
                    mandatory += price  # constant positive term, always worth including
                else:
                    optional.append((price, others))
            disjuncts: list[fm.Row] = []
            for size in range(len(optional) + 1):
                for chosen in combinations(optional, size):
                    coeffs = dict(own_vars)
                    const = mandatory
                    for price, others in chosen:
                        const += price
                        for v in others:
                            coeffs[v] = coeffs.get(v, Fraction(0)) + 1
                    disjuncts.append((coeffs, const))
            constraints.append(disjuncts)

    # The largest disjunct (all optional elements) dominates the others
    # pointwise on the base polytope: others' payments on e never exceed
    # c_e(load(S)) by the equalities, and the deviation price is taken at a
    # load >= load(S), so every max(0, .) term is non-negative there. A node
    # is therefore completable iff it stays feasible with the remaining
    # constraints at their largest disjuncts, which prunes doomed subtrees
    # without changing which combination is found first.
    envelopes = [d[-1] for d in constraints]
    exhausted = 0
    witness: Optional[dict] = None

    def remaining(depth: int) -> int:
        count = 1
        for d in constraints[depth:]:
            count *= len(d)
        return count

    def search(depth: int, rows: list[fm.Row]) -> bool:
        nonlocal exhausted, witness
        point = fm.solve(rows + envelopes[depth:], equalities, variables)
        if point is None:
            exhausted += remaining(depth)
            return False
        if depth == len(constraints):
            witness = point
            return True
        for disjunct in constraints[depth]:
            if search(depth + 1, rows + [disjunct]):
                return True
        return False

    if not search(0, list(nonneg)):
        return SupportabilityResult(None, exhausted)

    entries: dict[str, dict[str, Fraction]] = {p.id: {} for p in instance.players}
    for (pid, rid), amount in witness.items():
        if amount != 0:
            entries[pid][rid] = amount
    payments = PaymentMatrix(entries)
    sp = StrategyProfile(profile, payments)
    if not verify_pne(instance, sp, mode="general").is_pne:
        raise InvariantViolationError("supportability witness failed re-verification")
    return SupportabilityResult(payments, exhausted)


def pne_exists_exhaustive(
    instance: GameInstance,
) -> tuple[bool, Optional[StrategyProfile]]:
    """Search every configuration profile for supporting payments."""
    options = [enumerate_strategies(instance, p) for p in instance.players]
    count = 1
    for opts in options:
        count *= len(opts)
        if count > EXISTS_PROFILE_CAP:
            raise CapacityError(
                f"profile space exceeds {EXISTS_PROFILE_CAP}; exhaustive search refused"
            )
    ids = [p.id for p in instance.players]
    for combo in product(*options):
        profile = ConfigurationProfile(dict(zip(ids, combo)))
        result = supportable(instance, profile)
        if result.feasible:
            return True, StrategyProfile(profile, result.payments)
    return False, None
