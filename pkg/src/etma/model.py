"""System models: components, mutually exclusive states, probabilities.

A system is an ordered list of components.  Each component declares a
finite set of state labels; the order of declaration matters because the
event tree branches in that order and downstream reports index into it.
The state sets are treated as exhaustive and mutually exclusive.  The
machine can check distinctness and non-emptiness; exhaustiveness is an
assumption the modeler signs off on, so it is surfaced in documentation
rather than as a validation failure.

Probabilities live in a separate table keyed by (component, state) so the
same structural model can be evaluated under different assignments.  Per
component the state probabilities must sum to 1 within a configurable
tolerance.

The module also owns the canonical JSON document formats for models and
probability tables, plus the exponential reliability helpers used to fill
tables from failure rates.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

from .errors import DocumentError, EvaluationError

MODEL_FORMAT = "etma-model/1"
PROBS_FORMAT = "etma-probs/1"

# Default tolerance for the per-component sum-to-one check.
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StateLabel:
    """A concrete event: one component observed in one of its states."""

    component: str
    state: str
    display: str | None = field(default=None, compare=False)

    def compact(self) -> str:
        return f"{self.component}_{self.state}"

    def full(self) -> str:
        return f"{self.component}={self.state}"

    def __str__(self) -> str:
        return self.compact()


@dataclass
class ComponentDef:
    """One component and its declared state labels, in branching order."""

    id: str
    states: list[str]
    failure_rate: float | None = None

    def __post_init__(self):
        if not isinstance(self.id, str):
            raise TypeError("component id must be a string")
        if not isinstance(self.states, list) or any(
            not isinstance(s, str) for s in self.states
        ):
            raise TypeError("component states must be a list of strings")


@dataclass
class SystemModel:
    name: str
    components: list[ComponentDef]

    def __post_init__(self):
        if not isinstance(self.name, str):
            raise TypeError("model name must be a string")

    def component(self, component_id: str) -> ComponentDef | None:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        return None

    def component_index(self, component_id: str) -> int | None:
        for i, comp in enumerate(self.components):
            if comp.id == component_id:
                return i
        return None


@dataclass(frozen=True)
class Violation:
    """One validation finding.  severity is "error" or "warning"."""

    severity: str
    code: str
    message: str
    component: str | None = None
    state: str | None = None


def _error(code, message, component=None, state=None):
    return Violation("error", code, message, component, state)


def _warning(code, message, component=None, state=None):
    return Violation("warning", code, message, component, state)


def validate_model(model: SystemModel) -> list[Violation]:
    """Check the structural rules a model must obey.

    Reports empty ids, empty state lists, duplicate component ids, and
    duplicate state labels within a component.  An empty report means the
    model is structurally sound.  Whether the declared states cover every
    outcome that matters is the modeler's call and is not checked here.
    """
    report: list[Violation] = []
    if not model.name:
        report.append(_error("empty-name", "model name must not be empty"))
    if not model.components:
        report.append(_error("no-components", "model declares no components"))
    seen_ids: set[str] = set()
    for comp in model.components:
        if not comp.id:
            report.append(_error("empty-id", "component id must not be empty"))
            continue
        if comp.id in seen_ids:
            report.append(
                _error(
                    "duplicate-component",
                    f"component id {comp.id!r} declared more than once",
                    component=comp.id,
                )
            )
        seen_ids.add(comp.id)
        if not comp.states:
            report.append(
                _error(
                    "no-states",
                    f"component {comp.id!r} declares no states",
                    component=comp.id,
                )
            )
        seen_states: set[str] = set()
        for state in comp.states:
            if not state:
                report.append(
                    _error(
                        "empty-state",
                        f"component {comp.id!r} declares an empty state label",
                        component=comp.id,
                    )
                )
            elif state in seen_states:
                report.append(
                    _error(
                        "duplicate-state",
                        f"component {comp.id!r} declares state {state!r} twice",
                        component=comp.id,
                        state=state,
                    )
                )
            seen_states.add(state)
        if comp.failure_rate is not None and not comp.failure_rate >= 0:
            report.append(
                _error(
                    "negative-rate",
                    f"component {comp.id!r} has a negative failure rate",
                    component=comp.id,
                )
            )
    return report


@dataclass
class ProbabilityTable:
    """Per-event probabilities keyed by (component id, state label)."""

    entries: dict[tuple[str, str], float] = field(default_factory=dict)
    tolerance: float = DEFAULT_TOLERANCE

    def get(self, component: str, state: str) -> float:
        try:
            return self.entries[(component, state)]
        except KeyError:
            raise EvaluationError(
                f"no probability entry for event {component}_{state}"
            ) from None

    def set(self, component: str, state: str, p: float) -> None:
        self.entries[(component, state)] = p

    def components(self) -> set[str]:
        return {component for component, _ in self.entries}


def validate_probabilities(
    model: SystemModel, table: ProbabilityTable
) -> list[Violation]:
    """Check a probability assignment against a model.

    Errors: entries for undeclared components or states, values outside
    [0, 1], states left without an entry while siblings have one, and
    per-component sums off 1 by more than the table tolerance.  A component
    with no entries at all is only a warning; it simply cannot be evaluated
    yet.
    """
    report: list[Violation] = []
    declared = {comp.id: comp for comp in model.components}
    for (component, state), p in sorted(table.entries.items()):
        comp = declared.get(component)
        if comp is None:
            report.append(
                _error(
                    "unknown-component",
                    f"probability given for undeclared component {component!r}",
                    component=component,
                    state=state,
                )
            )
            continue
        if state not in comp.states:
            report.append(
                _error(
                    "unknown-state",
                    f"probability given for undeclared state {component}_{state}",
                    component=component,
                    state=state,
                )
            )
            continue
        if not 0.0 <= p <= 1.0:
            report.append(
                _error(
                    "out-of-range",
                    f"probability for {component}_{state} is {p!r}, outside [0, 1]",
                    component=component,
                    state=state,
                )
            )
    for comp in model.components:
        present = [s for s in comp.states if (comp.id, s) in table.entries]
        if not present:
            report.append(
                _warning(
                    "no-entries",
                    f"component {comp.id!r} has no probability entries",
                    component=comp.id,
                )
            )
            continue
        missing = [s for s in comp.states if (comp.id, s) not in table.entries]
        for state in missing:
            report.append(
                _error(
                    "missing-entry",
                    f"state {comp.id}_{state} has no probability entry",
                    component=comp.id,
                    state=state,
                )
            )
        if missing:
            continue
        total = 0.0
        for state in comp.states:
            total += table.entries[(comp.id, state)]
        if abs(total - 1.0) > table.tolerance:
            report.append(
                _error(
                    "bad-sum",
                    f"probabilities for component {comp.id!r} sum to {total!r},"
                    f" not 1 within {table.tolerance!r}",
                    component=comp.id,
                )
            )
    return report


def has_errors(report: list[Violation]) -> bool:
    return any(v.severity == "error" for v in report)


def exp_unreliability(rate: float, horizon: float, digits: int | None = None) -> float:
    """Probability of at least one failure in ``horizon`` at constant ``rate``.

    Computed as 1 - exp(-rate * horizon) via expm1 to keep precision for
    small arguments.  ``digits`` optionally rounds the result to that many
    decimal places, which is how the coarse percentages in worked studies
    are reproduced.
    """
    if rate < 0:
        raise ValueError("failure rate must be non-negative")
    if horizon < 0:
        raise ValueError("time horizon must be non-negative")
    value = -math.expm1(-rate * horizon)
    if digits is not None:
        value = round(value, digits)
    return value


def exp_reliability(rate: float, horizon: float, digits: int | None = None) -> float:
    """Complement of exp_unreliability; the pair sums to 1 in floats."""
    value = 1.0 - exp_unreliability(rate, horizon)
    if digits is not None:
        value = round(value, digits)
    return value


# --------------------------------------------------------------------------
# JSON documents
# --------------------------------------------------------------------------


def _require(doc, key, where):
    if not isinstance(doc, dict):
        raise DocumentError("expected an object", where or "document root")
    if key not in doc:
        raise DocumentError(f"missing required key {key!r}", where or "document root")
    return doc[key]


def _check_format(doc, expected, where="format"):
    tag = _require(doc, "format", "")
    if tag != expected:
        raise DocumentError(
            f"unsupported format tag {tag!r}, expected {expected!r}", where
        )


def model_to_doc(model: SystemModel) -> dict:
    components = []
    for comp in model.components:
        entry: dict = {"id": comp.id, "states": list(comp.states)}
        if comp.failure_rate is not None:
            entry["failure_rate"] = comp.failure_rate
        components.append(entry)
    return {"format": MODEL_FORMAT, "name": model.name, "components": components}


def model_from_doc(doc: dict) -> SystemModel:
    _check_format(doc, MODEL_FORMAT)
    name = _require(doc, "name", "name")
    if not isinstance(name, str):
        raise DocumentError("model name must be a string", "name")
    raw = _require(doc, "components", "components")
    if not isinstance(raw, list):
        raise DocumentError("expected a list", "components")
    components = []
    for i, item in enumerate(raw):
        where = f"components[{i}]"
        cid = _require(item, "id", where)
        if not isinstance(cid, str):
            raise DocumentError("component id must be a string", f"{where}.id")
        states = _require(item, "states", where)
        if not isinstance(states, list) or any(
            not isinstance(s, str) for s in states
        ):
            raise DocumentError(
                "states must be a list of strings", f"{where}.states"
            )
        rate = item.get("failure_rate")
        if rate is not None and not isinstance(rate, (int, float)):
            raise DocumentError(
                "failure_rate must be a number", f"{where}.failure_rate"
            )
        components.append(ComponentDef(cid, list(states), rate))
    return SystemModel(name, components)


def table_to_doc(table: ProbabilityTable) -> dict:
    entries = [
        {"component": component, "state": state, "p": p}
        for (component, state), p in sorted(table.entries.items())
    ]
    return {"format": PROBS_FORMAT, "tolerance": table.tolerance, "entries": entries}


def table_from_doc(doc: dict) -> ProbabilityTable:
    _check_format(doc, PROBS_FORMAT)
    tolerance = doc.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tolerance, (int, float)) or tolerance < 0:
        raise DocumentError("tolerance must be a non-negative number", "tolerance")
    raw = _require(doc, "entries", "entries")
    if not isinstance(raw, list):
        raise DocumentError("expected a list", "entries")
    entries: dict[tuple[str, str], float] = {}
    for i, item in enumerate(raw):
        where = f"entries[{i}]"
        component = _require(item, "component", where)
        state = _require(item, "state", where)
        p = _require(item, "p", where)
        if not isinstance(component, str) or not isinstance(state, str):
            raise DocumentError(
                "component and state must be strings", where
            )
        if not isinstance(p, (int, float)):
            raise DocumentError("p must be a number", f"{where}.p")
        key = (component, state)
        if key in entries:
            raise DocumentError(
                f"duplicate entry for event {component}_{state}", where
            )
        entries[key] = float(p)
    return ProbabilityTable(entries, float(tolerance))


def model_content_hash(model: SystemModel) -> str:
    """Stable content address of a model, used to cross-check references."""
    blob = json.dumps(model_to_doc(model), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()
