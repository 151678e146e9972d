"""Built-in worked instances and the no-equilibrium construction.

The two small games show both failure modes: machine costs whose marginals
are neither monotone direction, and fixed-cost connection routing where every
pair of chosen paths overlaps in one edge. The generator turns any antichain
violating the basis exchange axiom into a two-player weighted game with
economies of scale that provably has no equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError, InvariantViolationError
from .matroids import UniformMatroid, validate_explicit_bases
from .model import (
    CostFunction,
    ExplicitAntichain,
    GameInstance,
    Player,
    Resource,
    as_fraction,
)

DEFAULT_PEAK = 100


def fig1a(peak=DEFAULT_PEAK) -> GameInstance:
    """Two identical machines, three unit jobs, cost table (0, 1, 1, peak).

    With a large peak the marginals are neither non-increasing nor
    non-decreasing and no equilibrium exists; with peak = 1 the table is a
    fixed cost and an equilibrium appears.
    """
    peak = as_fraction(peak)
    table = CostFunction((Fraction(0), Fraction(1), Fraction(1), peak))
    resources = (Resource("e", table), Resource("f", table))
    ground = frozenset({"e", "f"})
    players = tuple(
        Player(str(i), 1, UniformMatroid(ground, 1)) for i in (1, 2, 3)
    )
    return GameInstance(players, resources)


def diamond_connection() -> GameInstance:
    """Two-terminal-pair connection game on four fixed-cost edges.

    Edges a=(s1,s2), b=(s1,t2), c=(t2,t1), d=(s2,t1), each costing 1 once
    used. Player 1 routes s1->t1 via {a,d} or {b,c}; player 2 routes s2->t2
    via {a,b} or {c,d}. Every profile pair shares exactly one edge, so the
    sharer with positive payment always defects and no equilibrium exists.
    """
    fixed = CostFunction((Fraction(0), Fraction(1), Fraction(1)))
    resources = tuple(Resource(e, fixed) for e in ("a", "b", "c", "d"))
    p1 = Player("1", 1, ExplicitAntichain((frozenset({"a", "d"}), frozenset({"b", "c"}))))
    p2 = Player("2", 1, ExplicitAntichain((frozenset({"a", "b"}), frozenset({"c", "d"}))))
    return GameInstance((p1, p2), resources)


@dataclass(frozen=True)
class AntichainWitness:
    """Two sets and elements a, b, c such that every member set inside
    (X | Y) - {a} must contain both b and c."""

    X: frozenset
    Y: frozenset
    a: object
    b: object
    c: object


def nonmatroid_witness(antichain: Iterable[Iterable]) -> AntichainWitness:
    """Extract the forced-pair witness from an exchange-axiom violation.

    Among all violating triples (X, Y, x) pick one with |Y - X| smallest. If
    Y - X is a single element, that element is `a` and b, c come from X - Y;
    otherwise a = x and b, c come from Y - X. The defining property is then
    asserted by enumeration.
    """
    family = sorted({frozenset(s) for s in antichain}, key=sorted)
    if validate_explicit_bases(family) is None:
        raise InputError("antichain satisfies the exchange axiom; no witness exists")
    members = set(family)
    violations = []
    for x_set in family:
        for y_set in family:
            if x_set == y_set:
                continue
            for x in sorted(x_set - y_set):
                if not any(x_set - {x} | {y} in members for y in y_set - x_set):
                    violations.append((x_set, y_set, x))
    best = min(violations, key=lambda t: (len(t[1] - t[0]), sorted(t[0]), sorted(t[1]), t[2]))
    x_set, y_set, x = best
    if len(y_set - x_set) == 1:
        (a,) = y_set - x_set
        b, c = sorted(x_set - y_set)[:2]
    else:
        a = x
        b, c = sorted(y_set - x_set)[:2]
    witness = AntichainWitness(x_set, y_set, a, b, c)
    for member in family:
        if member <= (x_set | y_set) - {a} and not {b, c} <= member:
            raise InvariantViolationError("antichain witness property failed")
    return witness


def build_no_pne_game(antichain: Iterable[Iterable], peak=DEFAULT_PEAK) -> GameInstance:
    """Two-player weighted game without an equilibrium, built from a non-matroid antichain.

    Both players get an isomorphic copy of the antichain. Copies overlap in
    exactly three resources x, y, z: player 1's witness elements (a, b, c) map
    to (x, y, z) and player 2's to (y, x, z). Demands are 5 and 4; costs are
    load on x, flat 11/2 on y, flat 4 on z, zero on the other witness-set
    elements, and a prohibitive flat cost on everything else. The prohibitive
    cost is raised to exceed any alternative configuration's price if the
    given value is too small.
    """
    witness = nonmatroid_witness(antichain)
    family = sorted({frozenset(s) for s in antichain}, key=sorted)
    ground = frozenset().union(*family)
    interesting = witness.X | witness.Y

    def mapping(copy: int) -> dict:
        if copy == 1:
            special = {witness.a: "x", witness.b: "y", witness.c: "z"}
        else:
            special = {witness.a: "y", witness.b: "x", witness.c: "z"}
        out = {}
        for token in ground:
            out[token] = special.get(token, f"p{copy}_{token}")
        return out

    map1, map2 = mapping(1), mapping(2)
    demand1, demand2 = 5, 4
    horizon = demand1 + demand2

    def flat(value: Fraction) -> CostFunction:
        return CostFunction((Fraction(0),) + (value,) * horizon)

    peak = as_fraction(peak)
    # Any alternative configuration costs at most the total of the three
    # shared resources at full load; the prohibitive cost must exceed that.
    bound = (
        Fraction(1)
        + Fraction(horizon)  # load-proportional resource at full load
        + Fraction(11, 2)
        + Fraction(4)
    )
    if peak < bound:
        peak = bound

    resources = [
        Resource("x", CostFunction(tuple(Fraction(t) for t in range(horizon + 1)))),
        Resource("y", flat(Fraction(11, 2))),
        Resource("z", flat(Fraction(4))),
    ]
    zero = CostFunction((Fraction(0),) * (horizon + 1))
    expensive = flat(peak)
    seen = {"x", "y", "z"}
    for copy_map in (map1, map2):
        for token in sorted(ground, key=str):
            rid = copy_map[token]
            if rid in seen:
                continue
            seen.add(rid)
            resources.append(
                Resource(rid, zero if token in interesting else expensive)
            )

    def translate(copy_map: dict) -> ExplicitAntichain:
        return ExplicitAntichain(
            tuple(frozenset(copy_map[t] for t in s) for s in family)
        )

    players = (
        Player("1", demand1, translate(map1)),
        Player("2", demand2, translate(map2)),
    )
    return GameInstance(players, tuple(resources))
