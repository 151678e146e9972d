"""Seeded random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from rbgames import (
    Arc,
    ConfigurationProfile,
    CostFunction,
    ExplicitBasesMatroid,
    FreeMatroid,
    GameInstance,
    Graph,
    GraphicMatroid,
    MatroidView,
    NetworkTerminals,
    PartitionMatroid,
    Player,
    Resource,
    UniformMatroid,
    enumerate_bases,
    is_cut,
    social_cost,
)


# ---------------------------------------------------------------- cost tables

def noninc_table(rng: random.Random, length: int, first_max: int = 40) -> CostFunction:
    """Random table with non-increasing unit marginals, values bounded by ~100."""
    values = [Fraction(0)]
    step = Fraction(rng.randint(0, first_max), 2)
    for _ in range(length):
        values.append(values[-1] + step)
        step = Fraction(rng.randint(0, int(2 * step)), 2) if step > 0 else Fraction(0)
    return CostFunction(tuple(values))


def convex_table(rng: random.Random, length: int) -> CostFunction:
    values = [Fraction(0)]
    step = Fraction(rng.randint(0, 4), 2)
    for _ in range(length):
        values.append(values[-1] + step)
        step += Fraction(rng.randint(0, 4), 2)
    return CostFunction(tuple(values))


def monotone_table(rng: random.Random, length: int) -> CostFunction:
    """Arbitrary non-decreasing table (no marginal shape guarantee)."""
    values = [Fraction(0)]
    for _ in range(length):
        values.append(values[-1] + Fraction(rng.randint(0, 12), 2))
    return CostFunction(tuple(values))


# ------------------------------------------------------------------- matroids

def random_matroid(rng: random.Random, pool: list[str], kinds=None):
    """Random desk-scale matroid over a subset of the resource pool."""
    kinds = kinds or ("uniform", "graphic", "partition", "free", "bases")
    kind = rng.choice(kinds)
    if kind == "uniform":
        ground = rng.sample(pool, rng.randint(1, min(4, len(pool))))
        return UniformMatroid(frozenset(ground), rng.randint(1, min(3, len(ground))))
    if kind == "free":
        ground = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        return FreeMatroid(frozenset(ground))
    if kind == "partition":
        ground = rng.sample(pool, rng.randint(2, min(5, len(pool))))
        rng.shuffle(ground)
        cut = rng.randint(1, len(ground) - 1) if len(ground) > 1 else 1
        blocks = []
        for chunk in (ground[:cut], ground[cut:]):
            if chunk:
                blocks.append((frozenset(chunk), rng.randint(1, min(3, len(chunk)))))
        return PartitionMatroid(tuple(blocks))
    if kind == "graphic":
        n_nodes = rng.randint(2, 6)
        nodes = [f"n{k}" for k in range(n_nodes)]
        count = rng.randint(1, min(len(pool), 7))
        labels = rng.sample(pool, count)
        edges = []
        for i, label in enumerate(labels):
            if i == 0:
                u, v = rng.sample(nodes, 2)  # guarantee rank >= 1
            else:
                u = rng.choice(nodes)
                v = rng.choice(nodes)
            edges.append((label, u, v))
        return GraphicMatroid(tuple(edges))
    base = random_matroid(rng, pool, kinds=("uniform", "graphic", "partition"))
    return ExplicitBasesMatroid(tuple(enumerate_bases(base)))


def random_view(rng: random.Random, matroid) -> MatroidView:
    """Apply a few random valid contractions/deletions."""
    view = MatroidView(matroid)
    for _ in range(rng.randint(0, 2)):
        ground = sorted(view.ground)
        if not ground:
            break
        element = rng.choice(ground)
        if rng.random() < 0.5 and view.rank_of(frozenset({element})) == 1:
            view = MatroidView(view.base, view.contracted | {element}, view.deleted)
        else:
            view = MatroidView(view.base, view.contracted, view.deleted | {element})
    return view


# ------------------------------------------------------------------ instances

def random_unweighted_matroid_instance(rng: random.Random) -> GameInstance:
    """<= 5 unit players, graphic/uniform/partition/free spaces, non-increasing tables."""
    pool = [f"r{k}" for k in range(rng.randint(4, 8))]
    n_players = rng.randint(2, 5)
    players = tuple(
        Player(str(i + 1), 1, random_matroid(rng, pool)) for i in range(n_players)
    )
    used = set()
    for p in players:
        used |= p.strategy_space.ground
    resources = tuple(
        Resource(rid, noninc_table(rng, n_players)) for rid in pool if rid in used
    )
    return GameInstance(players, resources)


def random_weighted_capacity_instance(rng: random.Random, noninc: bool) -> GameInstance:
    """Weighted matroid instance inside the supportability oracle's capacity.

    <= 3 players, <= 6 bases each, <= 10 resources, demands <= 4.
    """
    pool = [f"r{k}" for k in range(rng.randint(3, 6))]
    n_players = rng.randint(2, 3)
    players = []
    for i in range(n_players):
        while True:
            matroid = random_matroid(rng, pool, kinds=("uniform", "graphic", "partition"))
            if len(enumerate_bases(matroid)) <= 6:
                break
        players.append(Player(str(i + 1), rng.randint(1, 4), matroid))
    players = tuple(players)
    total = sum(p.demand for p in players)
    used = set()
    for p in players:
        used |= p.strategy_space.ground
    table = noninc_table if noninc else monotone_table
    resources = tuple(
        Resource(rid, table(rng, total)) for rid in pool if rid in used
    )
    return GameInstance(players, resources)


def random_network_instance(rng: random.Random) -> GameInstance:
    """<= 8 nodes, <= 14 arcs, <= 5 players, demands <= 4, convex tables."""
    n_nodes = rng.randint(3, 8)
    nodes = tuple(f"v{k}" for k in range(n_nodes))
    n_players = rng.randint(1, 5)
    arcs = []
    counter = 0

    def add_arc(tail, head):
        nonlocal counter
        arcs.append(Arc(f"a{counter}", tail, head))
        counter += 1

    for _ in range(rng.randint(n_nodes - 1, 10)):
        tail, head = rng.sample(nodes, 2)
        add_arc(tail, head)

    terminals = []
    for _ in range(n_players):
        s, t = rng.sample(nodes, 2)
        terminals.append((s, t))

    def reachable(s, t):
        seen, frontier = {s}, [s]
        while frontier:
            node = frontier.pop()
            if node == t:
                return True
            for arc in arcs:
                if arc.tail == node and arc.head not in seen:
                    seen.add(arc.head)
                    frontier.append(arc.head)
        return False

    for s, t in terminals:
        if not reachable(s, t) and len(arcs) < 14:
            add_arc(s, t)
    terminals = [(s, t) for s, t in terminals if reachable(s, t)]
    if not terminals:
        add_arc(nodes[0], nodes[1])
        terminals = [(nodes[0], nodes[1])]
    players = tuple(
        Player(str(i + 1), rng.randint(1, 4), NetworkTerminals(s, t))
        for i, (s, t) in enumerate(terminals)
    )
    total = sum(p.demand for p in players)
    resources = tuple(Resource(a.resource, convex_table(rng, total)) for a in arcs)
    return GameInstance(players, resources, Graph(nodes, tuple(arcs)))


def random_antichain(rng: random.Random):
    ground = list(range(1, rng.randint(3, 5) + 1))
    family = set()
    for _ in range(rng.randint(2, 4)):
        size = rng.randint(1, len(ground))
        family.add(frozenset(rng.sample(ground, size)))
    # keep only inclusion-minimal sets so the family is an antichain
    minimal = {s for s in family if not any(t < s for t in family)}
    return sorted(minimal, key=sorted)


def random_nonmatroid_antichain(rng: random.Random):
    from rbgames import validate_explicit_bases

    while True:
        family = random_antichain(rng)
        if len(family) >= 2 and validate_explicit_bases(family) is not None:
            return family


# -------------------------------------------------------------------- oracles

def minimal_cuts(view: MatroidView) -> list[frozenset]:
    """All inclusion-wise minimal cuts by brute force (<= 10 elements)."""
    ground = sorted(view.ground)
    assert len(ground) <= 12
    cuts = []
    for size in range(1, len(ground) + 1):
        for combo in combinations(ground, size):
            candidate = frozenset(combo)
            if is_cut(view, candidate):
                cuts.append(candidate)
    return [c for c in cuts if not any(o < c for o in cuts)]


def brute_force_optimum_cost(instance: GameInstance) -> Fraction:
    """Independent optimum cost: direct enumeration written separately."""
    from rbgames.spaces import enumerate_strategies

    options = [enumerate_strategies(instance, p) for p in instance.players]
    ids = [p.id for p in instance.players]
    best = None
    for combo in product(*options):
        cost = social_cost(instance, ConfigurationProfile(dict(zip(ids, combo))))
        if best is None or cost < best:
            best = cost
    return best
