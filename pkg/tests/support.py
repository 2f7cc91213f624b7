"""Shared fixtures: the worked trip-circuit study and frozen expectations.

The listings and probabilities here were computed independently (by hand
and with an exhaustive outcome walk) before the engine existed; tests
compare the engine against them, never the other way around.
"""

import json
import random
from pathlib import Path

from etma import (
    ComponentDef,
    ProbabilityTable,
    ReductionDirective,
    StateLabel,
    SystemModel,
    directives_from_doc,
    model_from_doc,
    table_from_doc,
)

DATA = Path(__file__).parent / "data"

PROBABILITY_TOLERANCE = 1e-12


def load_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def trip_model() -> SystemModel:
    return model_from_doc(load_json(DATA / "trip_model.json"))


def trip_table() -> ProbabilityTable:
    return table_from_doc(load_json(DATA / "trip_probs.json"))


def trip_directives() -> list[ReductionDirective]:
    return directives_from_doc(load_json(DATA / "trip_directives.json"))


def abc_model() -> SystemModel:
    return model_from_doc(load_json(DATA / "abc_model.json"))


def events(path) -> tuple:
    """A path's events as plain (component, state) pairs."""
    return tuple((ev.component, ev.state) for ev in path.events)


def _parse_listing(text: str) -> list[tuple]:
    out = []
    for line in text.strip().splitlines():
        _, _, body = line.partition("[")
        body = body.rstrip("]")
        pairs = []
        for item in body.split(","):
            component, state = item.strip().rsplit("_", 1)
            pairs.append((component, state))
        out.append(tuple(pairs))
    return out


# Reduced trip circuit, all five conditioning directives applied.
TRIP_REDUCED_LISTING = _parse_listing("""
Path_0 = [CT_O, R_O, TC1_O, TC2_O, CB1_O, CB2_O]
Path_1 = [CT_O, R_O, TC1_O, TC2_O, CB1_O, CB2_F]
Path_2 = [CT_O, R_O, TC1_O, TC2_O, CB1_F, CB2_O]
Path_3 = [CT_O, R_O, TC1_O, TC2_O, CB1_F, CB2_F]
Path_4 = [CT_O, R_O, TC1_O, TC2_F, CB1_O]
Path_5 = [CT_O, R_O, TC1_O, TC2_F, CB1_F]
Path_6 = [CT_O, R_O, TC1_F, TC2_O, CB2_O]
Path_7 = [CT_O, R_O, TC1_F, TC2_O, CB2_F]
Path_8 = [CT_O, R_O, TC1_F, TC2_F]
Path_9 = [CT_O, R_F]
Path_10 = [CT_F]
""")

# Same system after duplicating CT 1-out-of-2.
TRIP_REDUNDANT_LISTING = _parse_listing("""
Path_0 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_O, CB1_O, CB2_O]
Path_1 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_O, CB1_O, CB2_F]
Path_2 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_O, CB1_F, CB2_O]
Path_3 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_O, CB1_F, CB2_F]
Path_4 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_F, CB1_O]
Path_5 = [CT_1_O, CT_2_O, R_O, TC1_O, TC2_F, CB1_F]
Path_6 = [CT_1_O, CT_2_O, R_O, TC1_F, TC2_O, CB2_O]
Path_7 = [CT_1_O, CT_2_O, R_O, TC1_F, TC2_O, CB2_F]
Path_8 = [CT_1_O, CT_2_O, R_O, TC1_F, TC2_F]
Path_9 = [CT_1_O, CT_2_O, R_F]
Path_10 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_O, CB1_O, CB2_O]
Path_11 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_O, CB1_O, CB2_F]
Path_12 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_O, CB1_F, CB2_O]
Path_13 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_O, CB1_F, CB2_F]
Path_14 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_F, CB1_O]
Path_15 = [CT_1_O, CT_2_F, R_O, TC1_O, TC2_F, CB1_F]
Path_16 = [CT_1_O, CT_2_F, R_O, TC1_F, TC2_O, CB2_O]
Path_17 = [CT_1_O, CT_2_F, R_O, TC1_F, TC2_O, CB2_F]
Path_18 = [CT_1_O, CT_2_F, R_O, TC1_F, TC2_F]
Path_19 = [CT_1_O, CT_2_F, R_F]
Path_20 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_O, CB1_O, CB2_O]
Path_21 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_O, CB1_O, CB2_F]
Path_22 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_O, CB1_F, CB2_O]
Path_23 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_O, CB1_F, CB2_F]
Path_24 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_F, CB1_O]
Path_25 = [CT_1_F, CT_2_O, R_O, TC1_O, TC2_F, CB1_F]
Path_26 = [CT_1_F, CT_2_O, R_O, TC1_F, TC2_O, CB2_O]
Path_27 = [CT_1_F, CT_2_O, R_O, TC1_F, TC2_O, CB2_F]
Path_28 = [CT_1_F, CT_2_O, R_O, TC1_F, TC2_F]
Path_29 = [CT_1_F, CT_2_O, R_F]
Path_30 = [CT_1_F, CT_2_F]
""")

# Abstract three-stage system: complete, then one truncation, then the
# truncation plus a splice of B under A_1.
ABC_COMPLETE_LISTING = _parse_listing("""
Path_0 = [A_1, B_1, C_1]
Path_1 = [A_1, B_1, C_2]
Path_2 = [A_1, B_2, C_1]
Path_3 = [A_1, B_2, C_2]
Path_4 = [A_2, B_1, C_1]
Path_5 = [A_2, B_1, C_2]
Path_6 = [A_2, B_2, C_1]
Path_7 = [A_2, B_2, C_2]
Path_8 = [A_3, B_1, C_1]
Path_9 = [A_3, B_1, C_2]
Path_10 = [A_3, B_2, C_1]
Path_11 = [A_3, B_2, C_2]
""")

ABC_TRUNCATED_LISTING = _parse_listing("""
Path_0 = [A_1, B_1, C_1]
Path_1 = [A_1, B_1, C_2]
Path_2 = [A_1, B_2, C_1]
Path_3 = [A_1, B_2, C_2]
Path_4 = [A_2, B_1, C_1]
Path_5 = [A_2, B_1, C_2]
Path_6 = [A_2, B_2, C_1]
Path_7 = [A_2, B_2, C_2]
Path_8 = [A_3]
""")

ABC_SPLICED_LISTING = _parse_listing("""
Path_0 = [A_1, C_1]
Path_1 = [A_1, C_2]
Path_2 = [A_2, B_1, C_1]
Path_3 = [A_2, B_1, C_2]
Path_4 = [A_2, B_2, C_1]
Path_5 = [A_2, B_2, C_2]
Path_6 = [A_3]
""")


def abc_truncate_directives():
    return [ReductionDirective((StateLabel("A", "3"),))]


def abc_splice_directives():
    return [
        ReductionDirective((StateLabel("A", "3"),)),
        ReductionDirective((StateLabel("A", "1"),), ("C",)),
    ]


# Outcome probabilities of the reduced trip circuit under the study's
# table, summed over the index sets named on the left.
TRIP_EXPECTED = {
    "both_cbs_fail": ((3, 5, 7, 8, 9, 10), 0.053899608064),
    "both_cbs_operate": ((0,), 0.824297048064),
    "cb1_only_fails": ((2, 3, 5, 6, 7, 8, 9, 10), 0.11480128),
    "cb1_only_operates": ((0, 1, 4), 0.88519872),
    "cb2_only_fails": ((1, 3, 4, 5, 7, 8, 9, 10), 0.11480128),
    "cb2_only_operates": ((0, 2, 6), 0.88519872),
}

REDUNDANT_EXPECTED = {
    "both_cbs_fail": (
        (3, 5, 7, 8, 9, 13, 15, 17, 18, 19, 23, 25, 27, 28, 29, 30),
        0.02551659630592,
    ),
    "both_cbs_operate": ((0, 10, 20), 0.84902595950592),
    "cb1_fails": (
        (2, 3, 5, 6, 7, 8, 9, 12, 13, 15, 16, 17, 18, 19,
         22, 23, 25, 26, 27, 28, 29, 30),
        0.0882453184,
    ),
    "cb1_operates": ((0, 1, 4, 10, 11, 14, 20, 21, 24), 0.9117546816),
}


def random_system(rng: random.Random, max_components=6, max_states=4):
    """A random model, a matching table, and a legal directive set.

    Prefixes are grown from sampled joint outcomes so they always resolve
    against the complete tree; nesting candidates are dropped.
    """
    n = rng.randint(1, max_components)
    components = []
    for i in range(n):
        k = rng.randint(1, max_states)
        components.append(
            ComponentDef(f"K{i}", [f"s{j}" for j in range(k)])
        )
    model = SystemModel(f"random-{rng.randrange(1 << 30)}", components)

    entries = {}
    for comp in components:
        weights = [rng.uniform(0.05, 1.0) for _ in comp.states]
        total = sum(weights)
        for state, weight in zip(comp.states, weights):
            entries[(comp.id, state)] = weight / total
    table = ProbabilityTable(entries)

    directives = []
    prefixes = []
    for _ in range(rng.randint(0, 3)):
        outcome = [rng.choice(comp.states) for comp in components]
        length = rng.randint(1, n)
        prefix = tuple(
            StateLabel(components[i].id, outcome[i]) for i in range(length)
        )
        nested = any(
            prefix[: len(p)] == p or p[: len(prefix)] == prefix
            for p in prefixes
        )
        if nested:
            continue
        downstream = [comp.id for comp in components[length:]]
        retain = tuple(r for r in downstream if rng.random() < 0.4)
        prefixes.append(prefix)
        directives.append(ReductionDirective(prefix, retain))
    return model, table, directives
