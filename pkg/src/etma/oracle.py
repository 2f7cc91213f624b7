"""Independent checks of the tree engine's probability arithmetic.

Both checks work directly on the model's outcome space and never touch
the tree builder or the reducer, so agreement between the two routes is
meaningful.  The exhaustive check walks every combination of component
states, folds each one into the path a directive set leaves standing, and
aggregates probabilities; the Monte Carlo check samples outcomes instead
and reports a confidence interval.

A directive folds a complete outcome by matching its prefix against the
outcome's states.  Directive sets are required to be prefix-closed from
the first component (which is what makes them applicable to a complete
tree in one step) and non-nested, so at most one directive matches any
outcome.  The surviving path is the prefix plus the outcome's states of
the retained components; unmatched outcomes survive unchanged.  Surviving
paths are ordered by the first complete outcome that folds into them,
which reproduces depth-first path order.
"""

from __future__ import annotations

import math
import random
from itertools import product

from .errors import CapacityError, ConflictError, DirectiveError, PartitionError
from .model import ProbabilityTable, StateLabel, SystemModel
from .engine import (
    CONTAINS_ALL,
    CONTAINS_ANY,
    INDICES,
    PartitionQuery,
    ReductionDirective,
)

OUTCOME_CAP = 1 << 24

# two-sided 99% normal quantile
Z_99 = 2.5758293035489004


def _component_positions(model: SystemModel) -> dict[str, int]:
    return {comp.id: i for i, comp in enumerate(model.components)}


def _check_directives(model: SystemModel, directives) -> None:
    positions = _component_positions(model)
    for directive in directives:
        for expected, event in enumerate(directive.prefix):
            if positions.get(event.component) != expected:
                raise DirectiveError(
                    f"directive prefix must fix leading components in order;"
                    f" event {event} is out of place"
                )
            comp = model.components[expected]
            if event.state not in comp.states:
                raise DirectiveError(
                    f"directive prefix event {event} names an undeclared state"
                )
        previous = len(directive.prefix) - 1
        for component_id in directive.retain:
            position = positions.get(component_id)
            if position is None or position <= previous:
                raise DirectiveError(
                    f"retained component {component_id!r} must come after the"
                    f" prefix, in model order"
                )
            previous = position
    prefixes = [tuple(d.prefix) for d in directives]
    for i in range(len(prefixes)):
        for j in range(i + 1, len(prefixes)):
            a, b = prefixes[i], prefixes[j]
            short, long = (a, b) if len(a) <= len(b) else (b, a)
            if long[: len(short)] == short:
                raise ConflictError("directive prefixes nest or coincide")


def _fold_outcome(model, directives, positions, outcome) -> tuple:
    """Map one complete outcome to the surviving path's event tuple."""
    for directive in directives:
        if all(
            outcome[positions[ev.component]] == ev.state for ev in directive.prefix
        ):
            events = [(ev.component, ev.state) for ev in directive.prefix]
            events.extend(
                (component_id, outcome[positions[component_id]])
                for component_id in directive.retain
            )
            return tuple(events)
    return tuple(
        (comp.id, outcome[i]) for i, comp in enumerate(model.components)
    )


def _survivor_space(model, directives, table):
    """Aggregate the complete outcome space into surviving paths.

    Returns (ordered event tuples, probability per tuple).  Probabilities
    accumulate in complete-outcome order, which is fixed, so the result is
    deterministic.
    """
    size = 1
    for comp in model.components:
        size *= len(comp.states)
    if size > OUTCOME_CAP:
        raise CapacityError(
            f"outcome space has {size} combinations, over the cap of"
            f" {OUTCOME_CAP}; use the sampling check instead"
        )
    _check_directives(model, directives)
    positions = _component_positions(model)
    aggregated: dict[tuple, float] = {}
    order: list[tuple] = []
    state_sets = [comp.states for comp in model.components]
    for outcome in product(*state_sets):
        probability = 1.0
        for comp, state in zip(model.components, outcome):
            probability *= table.get(comp.id, state)
        survivor = _fold_outcome(model, directives, positions, outcome)
        if survivor not in aggregated:
            aggregated[survivor] = 0.0
            order.append(survivor)
        aggregated[survivor] += probability
    return order, aggregated


def _selected_tuples(order, query: PartitionQuery) -> set[tuple]:
    if query.mode == INDICES:
        bad = sorted(i for i in query.indices if not 0 <= i < len(order))
        if bad:
            raise PartitionError(
                f"path index {bad[0]} out of range for {len(order)} paths"
            )
        return {order[i] for i in query.indices}
    wanted = {(label.component, label.state) for label in query.labels}
    if query.mode == CONTAINS_ALL:
        return {events for events in order if wanted <= set(events)}
    return {events for events in order if wanted & set(events)}


def oracle_brute_force(
    model: SystemModel,
    directives,
    table: ProbabilityTable,
    query: PartitionQuery,
) -> float:
    """Exhaustively computed probability of the query's selected paths."""
    order, aggregated = _survivor_space(model, directives, table)
    selected = _selected_tuples(order, query)
    total = 0.0
    for events in order:
        if events in selected:
            total += aggregated[events]
    return total


def oracle_monte_carlo(
    model: SystemModel,
    directives,
    table: ProbabilityTable,
    query: PartitionQuery,
    n_samples: int,
    seed: int,
) -> tuple[float, float]:
    """Sampled probability of the query's selected paths.

    Returns (estimate, half width of the normal-approximation 99%
    confidence interval).  Index queries are resolved to event tuples via
    the exhaustive aggregation first, so they need the outcome space under
    the cap; containment queries have no such limit.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    _check_directives(model, directives)
    positions = _component_positions(model)
    if query.mode == INDICES:
        order, _ = _survivor_space(model, directives, table)
        selected = _selected_tuples(order, query)

        def is_hit(events: tuple) -> bool:
            return events in selected

    else:
        wanted = {(label.component, label.state) for label in query.labels}
        if query.mode == CONTAINS_ALL:

            def is_hit(events: tuple) -> bool:
                return wanted <= set(events)

        else:

            def is_hit(events: tuple) -> bool:
                return bool(wanted & set(events))

    # cumulative state thresholds per component, in declared order
    cumulative: list[tuple[str, list[str], list[float]]] = []
    for comp in model.components:
        bounds: list[float] = []
        running = 0.0
        for state in comp.states:
            running += table.get(comp.id, state)
            bounds.append(running)
        cumulative.append((comp.id, comp.states, bounds))

    rng = random.Random(seed)
    hits = 0
    for _ in range(n_samples):
        outcome = []
        for _, states, bounds in cumulative:
            draw = rng.random()
            chosen = states[-1]
            for state, bound in zip(states, bounds):
                if draw < bound:
                    chosen = state
                    break
            outcome.append(chosen)
        events = _fold_outcome(model, directives, positions, tuple(outcome))
        if is_hit(events):
            hits += 1
    estimate = hits / n_samples
    half_width = Z_99 * math.sqrt(estimate * (1.0 - estimate) / n_samples)
    return estimate, half_width
