"""Core model semantics: loads, costs, marginal classification, private cost."""

import random
from fractions import Fraction

import pytest

from rbgames import (
    ConfigurationProfile,
    CostFunction,
    GameInstance,
    INFINITE_COST,
    InputError,
    PaymentMatrix,
    Player,
    Resource,
    StrategyProfile,
    UniformMatroid,
    classify_marginal,
    load,
    private_cost,
    social_cost,
)
from helpers import monotone_table


def unit_players(n, ground, rank=1):
    return tuple(
        Player(str(i + 1), 1, UniformMatroid(frozenset(ground), rank)) for i in range(n)
    )


def test_load_three_unit_players():
    g = GameInstance(
        unit_players(3, {"e", "f"}),
        (Resource("e", CostFunction((0, 1, 1, 1))), Resource("f", CostFunction((0, 1, 1, 1)))),
    )
    profile = ConfigurationProfile({"1": {"e"}, "2": {"e"}, "3": {"e"}})
    assert load(g, profile, "e") == 3
    assert load(g, profile, "f") == 0


def test_load_weighted_demands():
    g = GameInstance(
        (
            Player("1", 5, UniformMatroid(frozenset({"x"}), 1)),
            Player("2", 4, UniformMatroid(frozenset({"x"}), 1)),
        ),
        (Resource("x", CostFunction(tuple(range(10)))),),
    )
    profile = ConfigurationProfile({"1": {"x"}, "2": {"x"}})
    assert load(g, profile, "x") == 9


def test_load_unknown_resource():
    g = GameInstance(
        unit_players(1, {"e"}),
        (Resource("e", CostFunction((0, 1))),),
    )
    with pytest.raises(InputError):
        load(g, ConfigurationProfile({"1": {"e"}}), "zz")


def test_social_cost_single_player():
    g = GameInstance(unit_players(1, {"e"}), (Resource("e", CostFunction((0, 1))),))
    assert social_cost(g, ConfigurationProfile({"1": {"e"}})) == 1


def test_social_cost_peak_machine():
    big = CostFunction((0, 1, 1, 100))
    g = GameInstance(
        unit_players(3, {"e", "f"}), (Resource("e", big), Resource("f", big))
    )
    profile = ConfigurationProfile({"1": {"e"}, "2": {"e"}, "3": {"e"}})
    assert social_cost(g, profile) == 100


def test_social_cost_split():
    c = CostFunction((0, 2, 2))
    g = GameInstance(unit_players(2, {"e", "f"}), (Resource("e", c), Resource("f", c)))
    profile = ConfigurationProfile({"1": {"e"}, "2": {"f"}})
    assert social_cost(g, profile) == 4


def test_classify_marginal_examples():
    assert classify_marginal(CostFunction((0, 1, 1, 100))) == "neither"
    assert classify_marginal(CostFunction((0, 3, 6, 9))) == "both"
    assert classify_marginal(CostFunction((0, 2, 3, Fraction(7, 2)))) == "nonincreasing"
    assert classify_marginal(CostFunction((0, 1, 3, 6))) == "nondecreasing"
    assert classify_marginal(CostFunction((0,))) == "both"


def test_classify_both_iff_affine():
    rng = random.Random(7)
    for _ in range(200):
        table = monotone_table(rng, rng.randint(1, 6))
        slope = table.values[1] - table.values[0] if table.max_load else Fraction(0)
        affine = all(table.values[t] == slope * t for t in range(table.max_load + 1))
        assert (classify_marginal(table) == "both") == affine


def test_cost_function_invariants():
    with pytest.raises(InputError):
        CostFunction((1, 2))  # nonzero at load 0
    with pytest.raises(InputError):
        CostFunction((0, 2, 1))  # decreasing
    with pytest.raises(InputError):
        CostFunction(())
    c = CostFunction((0, 1, 4))
    with pytest.raises(InputError):
        c(3)  # beyond the table
    with pytest.raises(InputError):
        c(-1)


def test_instance_requires_tables_to_cover_total_demand():
    with pytest.raises(InputError):
        GameInstance(
            unit_players(3, {"e"}),
            (Resource("e", CostFunction((0, 1))),),
        )


def test_private_cost_exact_payment():
    g = GameInstance(unit_players(1, {"e"}), (Resource("e", CostFunction((0, 1))),))
    sp = StrategyProfile(
        ConfigurationProfile({"1": {"e"}}), PaymentMatrix({"1": {"e": 1}})
    )
    assert private_cost(g, sp, "1") == 1


def test_private_cost_underpaid_is_infinite():
    g = GameInstance(unit_players(1, {"e"}), (Resource("e", CostFunction((0, 1))),))
    sp = StrategyProfile(ConfigurationProfile({"1": {"e"}}), PaymentMatrix({}))
    assert private_cost(g, sp, "1") == INFINITE_COST


def test_private_cost_shared_halves():
    c = CostFunction((0, 1, 1))
    g = GameInstance(unit_players(2, {"e"}), (Resource("e", c),))
    sp = StrategyProfile(
        ConfigurationProfile({"1": {"e"}, "2": {"e"}}),
        PaymentMatrix({"1": {"e": Fraction(1, 2)}, "2": {"e": Fraction(1, 2)}}),
    )
    assert private_cost(g, sp, "1") == Fraction(1, 2)
    assert private_cost(g, sp, "2") == Fraction(1, 2)


def test_private_cost_flips_when_any_payment_drops():
    c = CostFunction((0, 4, 4))
    g = GameInstance(unit_players(2, {"e"}), (Resource("e", c),))
    config = ConfigurationProfile({"1": {"e"}, "2": {"e"}})
    covered = StrategyProfile(config, PaymentMatrix({"1": {"e": 3}, "2": {"e": 1}}))
    assert private_cost(g, covered, "1") == 3
    for reduced in ({"1": {"e": Fraction(5, 2)}, "2": {"e": 1}},
                    {"1": {"e": 3}, "2": {"e": Fraction(1, 2)}}):
        sp = StrategyProfile(config, PaymentMatrix(reduced))
        assert private_cost(g, sp, "1") == INFINITE_COST
        assert private_cost(g, sp, "2") == INFINITE_COST


def test_load_matches_naive_resum():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 4)
        ground = {"e", "f", "g"}
        players = tuple(
            Player(str(i + 1), rng.randint(1, 3), UniformMatroid(frozenset(ground), 1))
            for i in range(n)
        )
        total = sum(p.demand for p in players)
        g = GameInstance(
            players,
            tuple(Resource(r, CostFunction((0,) * 1 + tuple(range(1, total + 1)))) for r in sorted(ground)),
        )
        profile = ConfigurationProfile(
            {p.id: {rng.choice(sorted(ground))} for p in players}
        )
        for r in sorted(ground):
            naive = 0
            for p in players:
                if r in profile.of(p.id):
                    naive += p.demand
            assert load(g, profile, r) == naive


def test_exactness_types():
    c = CostFunction((0, Fraction(1, 3), Fraction(2, 3)))
    assert isinstance(c(1), Fraction) and c(2) == Fraction(2, 3)
    g = GameInstance(unit_players(2, {"e"}), (Resource("e", c),))
    cost = social_cost(g, ConfigurationProfile({"1": {"e"}, "2": {"e"}}))
    assert isinstance(cost, Fraction) and cost == Fraction(2, 3)


def test_payment_matrix_rejects_negative_and_outside_support():
    with pytest.raises(InputError):
        PaymentMatrix({"1": {"e": -1}})
    g = GameInstance(unit_players(1, {"e"}), (Resource("e", CostFunction((0, 1))),))
    with pytest.raises(InputError):
        StrategyProfile(
            ConfigurationProfile({"1": {"e"}}), PaymentMatrix({"1": {"zz": 1}})
        )


def test_float_rationals_rejected():
    with pytest.raises(InputError):
        CostFunction((0, 0.5))
