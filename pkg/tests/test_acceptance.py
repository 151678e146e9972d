"""Acceptance suite: every criterion at its stated size and tolerance (all exact).

Each test prints one PASS/FAIL line; run with `pytest tests/test_acceptance.py -v -s`.
"""

import random
import time
from fractions import Fraction
from itertools import product

from rbgames import (
    CapacityError,
    ConfigurationProfile,
    build_no_pne_game,
    check_supportable_matroid,
    delta_table,
    diamond_connection,
    enumerate_bases,
    exchange_set,
    fig1a,
    fixed_elements,
    is_coloop,
    max_bottleneck_min_cut,
    min_weight_basis,
    pne_by_marginal_pricing,
    pne_exists_exhaustive,
    sequential_insertion,
    social_cost,
    social_optimum_bruteforce,
    solve_unweighted_matroid,
    solve_weighted_matroid,
    supportable,
    verify_pne,
)
from rbgames.model import all_loads
from rbgames.spaces import enumerate_strategies
from helpers import (
    minimal_cuts,
    random_matroid,
    random_network_instance,
    random_nonmatroid_antichain,
    random_unweighted_matroid_instance,
    random_view,
    random_weighted_capacity_instance,
)
from test_matroids import check_sweep_against_enumeration


def report(number, description):
    def decorator(fn):
        def wrapper():
            start = time.time()
            try:
                fn()
            except BaseException:
                print(f"ACCEPTANCE {number} ({description}): FAIL")
                raise
            print(
                f"ACCEPTANCE {number} ({description}): PASS [{time.time() - start:.1f}s]"
            )

        wrapper.__name__ = fn.__name__
        return wrapper

    return decorator


@report(1, "unit-demand matroid solver campaign, 200 seeded instances")
def test_criterion_1_matroid_solver():
    start = time.time()
    for seed in range(200):
        g = random_unweighted_matroid_instance(random.Random(seed))
        sp, trace = solve_unweighted_matroid(g, keep_trace=True)
        loads = all_loads(g, sp.config)
        for r in g.resources:
            assert sp.payments.total_on(r.id) == r.cost(loads[r.id])
        weights = [rec.bottleneck_weight for rec in trace.iterations]
        assert all(a >= b for a, b in zip(weights, weights[1:]))
        assert verify_pne(g, sp, mode="general").is_pne
    assert time.time() - start < 60


@report(2, "supportability characterization vs direct oracle, 100 instances")
def test_criterion_2_characterization_equivalence():
    start = time.time()
    for seed in range(100):
        g = random_weighted_capacity_instance(random.Random(1000 + seed), noninc=False)
        options = [enumerate_bases(p.strategy_space) for p in g.players]
        ids = [p.id for p in g.players]
        for combo in product(*options):
            profile = ConfigurationProfile(dict(zip(ids, combo)))
            assert check_supportable_matroid(g, profile) == supportable(g, profile).feasible
    assert time.time() - start < 600


@report(3, "optimum supportable and paid as equilibrium, 100 instances")
def test_criterion_3_optimum_equilibrium():
    start = time.time()
    for seed in range(100):
        g = random_weighted_capacity_instance(random.Random(1000 + seed), noninc=True)
        optimum = social_optimum_bruteforce(g)
        assert check_supportable_matroid(g, optimum)
        sp = solve_weighted_matroid(g)
        assert verify_pne(g, sp, mode="general").is_pne
        assert social_cost(g, sp.config) == social_cost(g, optimum)
    assert time.time() - start < 600


@report(4, "convex network solvers, 200 seeded instances")
def test_criterion_4_convex_networks():
    start = time.time()
    priced = 0
    for seed in range(200):
        g = random_network_instance(random.Random(2000 + seed))
        outputs = [sequential_insertion(g)]
        try:
            outputs.append(pne_by_marginal_pricing(g))
            priced += 1
        except CapacityError:
            pass
        for sp in outputs:
            assert verify_pne(g, sp, mode="general").is_pne
            loads = all_loads(g, sp.config)
            for p in g.players:
                for e in sp.config.of(p.id):
                    bound = g.cost(e)(loads[e]) - g.cost(e)(loads[e] - p.demand)
                    assert sp.payments.amount(p.id, e) <= bound
    assert priced > 100
    assert time.time() - start < 300


@report(5, "counterexamples: no equilibrium exists")
def test_criterion_5_counterexamples():
    start = time.time()
    assert pne_exists_exhaustive(fig1a())[0] is False

    diamond = diamond_connection()
    ids = [p.id for p in diamond.players]
    profiles = 0
    for combo in product(*(p.strategy_space.sets for p in diamond.players)):
        assert not supportable(diamond, ConfigurationProfile(dict(zip(ids, combo)))).feasible
        profiles += 1
    assert profiles == 4
    assert pne_exists_exhaustive(diamond)[0] is False

    assert pne_exists_exhaustive(build_no_pne_game([frozenset({1, 2}), frozenset({3})]))[0] is False
    rng = random.Random(3000)
    for _ in range(20):
        g = build_no_pne_game(random_nonmatroid_antichain(rng))
        assert pne_exists_exhaustive(g)[0] is False
    assert time.time() - start < 120


@report(6, "greedy basis optimal; local exchange optima are global, 100 matroids")
def test_criterion_6_greedy_and_local_optima():
    start = time.time()
    rng = random.Random(4000)
    pool = [f"r{k}" for k in range(7)]
    for _ in range(100):
        m = random_matroid(rng, pool)
        weights = {e: Fraction(rng.randint(0, 12), rng.choice((1, 2))) for e in m.ground}
        bases = enumerate_bases(m)
        best = min(sum(weights[e] for e in b) for b in bases)
        greedy = min_weight_basis(m, weights)
        assert sum(weights[e] for e in greedy) == best
        for g in greedy:
            for f in exchange_set(m, greedy, g):
                assert weights[f] >= weights[g]
        current = rng.choice(bases)
        improved = True
        while improved:
            improved = False
            for g in sorted(current):
                for f in sorted(exchange_set(m, current, g)):
                    if weights[f] < weights[g]:
                        current = current - {g} | {f}
                        improved = True
                        break
                if improved:
                    break
        assert sum(weights[e] for e in current) == best
    assert time.time() - start < 60


@report(7, "bottleneck-cut sweep equals exhaustive argmax, 500 view sets")
def test_criterion_7_sweep_exhaustive():
    start = time.time()
    rng = random.Random(5000)
    pool = [f"r{k}" for k in range(7)]
    done = 0
    while done < 500:
        views = {
            str(i + 1): random_view(rng, random_matroid(rng, pool))
            for i in range(rng.randint(1, 3))
        }
        union = set()
        for v in views.values():
            union |= v.ground
        if len(union) > 10 or not union:
            continue
        weights = {e: Fraction(rng.randint(0, 10), rng.choice((1, 2))) for e in union}
        check_sweep_against_enumeration(views, weights, sorted(union))
        done += 1
    assert time.time() - start < 60
