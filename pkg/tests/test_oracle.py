"""The exhaustive and sampling checks against the tree engine."""

import random

import pytest

import support
from etma import (
    CapacityError,
    ComponentDef,
    ConflictError,
    DirectiveError,
    PartitionQuery,
    ProbabilityTable,
    ReductionDirective,
    StateLabel,
    SystemModel,
    apply_reduction,
    enumerate_paths,
    generate_complete,
    oracle_brute_force,
    oracle_monte_carlo,
    partition,
    partition_probability,
)

L = StateLabel
TOL = support.PROBABILITY_TOLERANCE


def engine_probability(model, directives, table, query):
    tree = apply_reduction(generate_complete(model), directives)
    paths = enumerate_paths(tree)
    result = partition(paths, query)
    p_selected, _ = partition_probability(paths, result, table)
    return p_selected


@pytest.mark.parametrize("name", sorted(support.TRIP_EXPECTED))
def test_oracle_agrees_on_trip_fixtures(
    name, trip_model, trip_table, trip_directives
):
    indices, expected = support.TRIP_EXPECTED[name]
    query = PartitionQuery.by_indices(indices)
    value = oracle_brute_force(trip_model, trip_directives, trip_table, query)
    assert value == pytest.approx(expected, abs=TOL)
    assert value == pytest.approx(
        engine_probability(trip_model, trip_directives, trip_table, query),
        abs=TOL,
    )


def test_oracle_total_probability_is_one(trip_model, trip_table, trip_directives):
    query = PartitionQuery.by_indices(range(11))
    assert oracle_brute_force(
        trip_model, trip_directives, trip_table, query
    ) == pytest.approx(1.0, abs=TOL)


def test_oracle_containment_queries(trip_model, trip_table, trip_directives):
    query = PartitionQuery.contains_all([L("CB1", "F"), L("CB2", "F")])
    value = oracle_brute_force(trip_model, trip_directives, trip_table, query)
    # only the fully expanded branch carries both breaker events
    assert value == pytest.approx(0.000788465664, abs=TOL)


def test_oracle_matches_engine_on_random_systems():
    rng = random.Random(1105)
    for _ in range(40):
        model, table, directives = support.random_system(rng)
        tree = apply_reduction(generate_complete(model), directives)
        paths = enumerate_paths(tree)
        count = len(paths)
        indices = [i for i in range(count) if rng.random() < 0.5]
        query = PartitionQuery.by_indices(indices)
        expected = engine_probability(model, directives, table, query)
        assert oracle_brute_force(
            model, directives, table, query
        ) == pytest.approx(expected, abs=TOL)


def test_oracle_rejects_oversized_spaces():
    model = SystemModel(
        "big",
        [ComponentDef(f"K{i}", ["a", "b", "c", "d"]) for i in range(13)],
    )
    table = ProbabilityTable(
        {(f"K{i}", s): 0.25 for i in range(13) for s in "abcd"}
    )
    with pytest.raises(CapacityError, match="67108864"):
        oracle_brute_force(model, [], table, PartitionQuery.by_indices({0}))


def test_oracle_rejects_non_leading_prefix(trip_model, trip_table):
    directives = [ReductionDirective((L("R", "F"),))]
    with pytest.raises(DirectiveError):
        oracle_brute_force(
            trip_model, directives, trip_table, PartitionQuery.by_indices({0})
        )


def test_oracle_rejects_nested_prefixes(trip_model, trip_table):
    directives = [
        ReductionDirective((L("CT", "F"),)),
        ReductionDirective((L("CT", "F"), L("R", "F"))),
    ]
    with pytest.raises(ConflictError):
        oracle_brute_force(
            trip_model, directives, trip_table, PartitionQuery.by_indices({0})
        )


def test_monte_carlo_covers_exact_value(trip_model, trip_table, trip_directives):
    query = PartitionQuery.by_indices({3, 5, 7, 8, 9, 10})
    estimate, half_width = oracle_monte_carlo(
        trip_model, trip_directives, trip_table, query,
        n_samples=200_000, seed=91,
    )
    assert half_width > 0
    assert abs(estimate - 0.053899608064) <= half_width


def test_monte_carlo_certain_query(trip_model, trip_table, trip_directives):
    query = PartitionQuery.contains_any(
        [L("CT", "O"), L("CT", "F")]
    )
    estimate, half_width = oracle_monte_carlo(
        trip_model, trip_directives, trip_table, query, n_samples=1000, seed=7
    )
    assert estimate == 1.0
    assert half_width == 0.0


def test_monte_carlo_is_deterministic(trip_model, trip_table, trip_directives):
    query = PartitionQuery.by_indices({3, 5, 7, 8, 9, 10})
    first = oracle_monte_carlo(
        trip_model, trip_directives, trip_table, query, n_samples=20_000, seed=5
    )
    second = oracle_monte_carlo(
        trip_model, trip_directives, trip_table, query, n_samples=20_000, seed=5
    )
    assert first == second
