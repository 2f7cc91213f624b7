"""Event tree construction, reduction, and probability evaluation.

The tree over a system model is the ordered product of its component
state sets: the root branches on the first component, every child on the
second, and so on, ending in explicit terminal nodes.  Each root-to-leaf
path is one outcome of the joint experiment, and path indices follow
depth-first order with edges taken in declared state order.  For a
complete tree that makes path k's events the mixed-radix digits of k,
most significant digit first.

Reduction prunes the combinatorial bulk.  A directive names a concrete
event prefix and the downstream components the continuation still depends
on; everything else below that prefix is spliced out.  Retaining nothing
truncates the path at the prefix.  Directives whose prefixes nest or
coincide are rejected as conflicting, so each directive rewrites a
disjoint subtree and the result does not depend on application order.

Probabilities multiply along a path (events are treated as independent
across components) and sum across paths of a partition.  Sums always run
in ascending path index order so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ConflictError,
    DirectiveError,
    DocumentError,
    InvalidModelError,
    PartitionError,
    RedundancyError,
    UnknownComponentError,
)
from .model import (
    ComponentDef,
    ProbabilityTable,
    StateLabel,
    SystemModel,
    has_errors,
    model_content_hash,
    validate_model,
)

TREE_FORMAT = "etma-tree/1"
DIRECTIVES_FORMAT = "etma-directives/1"


@dataclass
class Node:
    """Arena node.  component is None for terminals; edges pair a state
    label with a child arena index, in declared state order."""

    component: str | None
    edges: list[tuple[str, int]] = field(default_factory=list)

    @property
    def is_terminal(self) -> bool:
        return self.component is None


@dataclass
class EventTree:
    """Arena-allocated tree plus a reference to the model it came from.

    The full SystemModel is attached when the tree was built in process;
    a tree loaded from disk may carry only the name and content hash, and
    every operation on trees works from the structure alone.
    """

    nodes: list[Node]
    root: int
    model_name: str
    model_hash: str
    model: SystemModel | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Path:
    index: int
    events: tuple[StateLabel, ...]


@dataclass(frozen=True)
class ReductionDirective:
    """Under ``prefix``, keep the continuation conditional only on the
    components in ``retain`` (in model order); drop everything else.
    An empty ``retain`` ends the path at the prefix."""

    prefix: tuple[StateLabel, ...]
    retain: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.prefix:
            raise DirectiveError("directive prefix must not be empty")
        prefix_components = [ev.component for ev in self.prefix]
        if len(set(prefix_components)) != len(prefix_components):
            raise DirectiveError(
                "directive prefix names a component more than once"
            )
        if len(set(self.retain)) != len(self.retain):
            raise DirectiveError("directive retain list has duplicates")
        overlap = set(self.retain) & set(prefix_components)
        if overlap:
            raise DirectiveError(
                f"retained component {sorted(overlap)[0]!r} already fixed by the prefix"
            )


INDICES = "indices"
CONTAINS_ALL = "contains_all"
CONTAINS_ANY = "contains_any"
_PARTITION_MODES = (INDICES, CONTAINS_ALL, CONTAINS_ANY)


@dataclass(frozen=True)
class PartitionQuery:
    """Selects a subset of a path list.

    mode "indices" takes explicit path indices; "contains_all" selects
    paths whose events include every given label; "contains_any" selects
    paths including at least one.  The containment modes are shorthand
    that resolve to an index set against a concrete path list.
    """

    mode: str
    indices: frozenset[int] = frozenset()
    labels: frozenset[StateLabel] = frozenset()

    def __post_init__(self):
        if self.mode not in _PARTITION_MODES:
            raise PartitionError(f"unknown partition mode {self.mode!r}")

    @classmethod
    def by_indices(cls, indices) -> "PartitionQuery":
        return cls(INDICES, indices=frozenset(indices))

    @classmethod
    def contains_all(cls, labels) -> "PartitionQuery":
        return cls(CONTAINS_ALL, labels=frozenset(labels))

    @classmethod
    def contains_any(cls, labels) -> "PartitionQuery":
        return cls(CONTAINS_ANY, labels=frozenset(labels))


@dataclass(frozen=True)
class PartitionResult:
    selected: tuple[int, ...]
    complement: tuple[int, ...]


# --------------------------------------------------------------------------
# Construction and enumeration
# --------------------------------------------------------------------------


def generate_complete(model: SystemModel) -> EventTree:
    """Build the full tree over every combination of component states.

    Nodes are allocated in depth-first preorder, so arena indices are
    deterministic for a given model.
    """
    report = validate_model(model)
    if has_errors(report):
        raise InvalidModelError([v for v in report if v.severity == "error"])
    nodes: list[Node] = []

    def build(level: int) -> int:
        index = len(nodes)
        if level == len(model.components):
            nodes.append(Node(None))
            return index
        comp = model.components[level]
        node = Node(comp.id)
        nodes.append(node)
        for state in comp.states:
            node.edges.append((state, build(level + 1)))
        return index

    root = build(0)
    return EventTree(
        nodes=nodes,
        root=root,
        model_name=model.name,
        model_hash=model_content_hash(model),
        model=model,
    )


def count_paths(tree: EventTree) -> int:
    """Number of root-to-leaf paths, without materializing them."""
    counts: dict[int, int] = {}
    # nodes are in preorder, so children always carry higher indices
    for index in range(len(tree.nodes) - 1, -1, -1):
        node = tree.nodes[index]
        if node.is_terminal:
            counts[index] = 1
        else:
            counts[index] = sum(counts[child] for _, child in node.edges)
    return counts[tree.root]


def enumerate_paths(tree: EventTree) -> list[Path]:
    """All root-to-leaf paths in depth-first order, indexed from 0."""
    paths: list[Path] = []
    events: list[StateLabel] = []

    def walk(index: int) -> None:
        node = tree.nodes[index]
        if node.is_terminal:
            paths.append(Path(len(paths), tuple(events)))
            return
        for state, child in node.edges:
            events.append(StateLabel(node.component, state))
            walk(child)
            events.pop()

    walk(tree.root)
    return paths


def terminal_path_indices(tree: EventTree) -> dict[int, int]:
    """Map terminal arena index -> path index, in enumeration order."""
    mapping: dict[int, int] = {}

    def walk(index: int) -> None:
        node = tree.nodes[index]
        if node.is_terminal:
            mapping[index] = len(mapping)
            return
        for _, child in node.edges:
            walk(child)

    walk(tree.root)
    return mapping


# --------------------------------------------------------------------------
# Reduction
# --------------------------------------------------------------------------


def _check_conflicts(directives) -> None:
    prefixes = [tuple(d.prefix) for d in directives]
    for i in range(len(prefixes)):
        for j in range(i + 1, len(prefixes)):
            a, b = prefixes[i], prefixes[j]
            short, long = (a, b) if len(a) <= len(b) else (b, a)
            if long[: len(short)] == short:
                a_text = ", ".join(str(ev) for ev in a)
                b_text = ", ".join(str(ev) for ev in b)
                raise ConflictError(
                    f"directives overlap: prefix [{a_text}] and prefix [{b_text}]"
                )


def _resolve_prefix(tree: EventTree, prefix) -> tuple[int, int]:
    """Walk the prefix from the root; return (node index, edge position)
    of the edge whose subtree the directive rewrites."""
    current = tree.root
    location = (-1, -1)
    for event in prefix:
        node = tree.nodes[current]
        if node.is_terminal or node.component != event.component:
            raise DirectiveError(
                f"directive prefix does not resolve: no branch for event {event}"
            )
        for position, (state, child) in enumerate(node.edges):
            if state == event.state:
                location = (current, position)
                current = child
                break
        else:
            raise DirectiveError(
                f"directive prefix does not resolve: no branch for event {event}"
            )
    return location


def _subtree_component_order(tree: EventTree, root: int) -> list[str]:
    """Branching order of the components below ``root``.

    Every path visits components in model order, so merging the parent to
    child precedence seen along edges gives that order back without the
    model.  Ties (components never on a common path) fall back to first
    visit order, which is the only order the tree can witness.
    """
    first_seen: dict[str, int] = {}
    succ: dict[str, set[str]] = {}

    def walk(index: int, previous: str | None) -> None:
        node = tree.nodes[index]
        if node.is_terminal:
            return
        if node.component not in first_seen:
            first_seen[node.component] = len(first_seen)
            succ.setdefault(node.component, set())
        if previous is not None:
            succ[previous].add(node.component)
        for _, child in node.edges:
            walk(child, node.component)

    walk(root, None)
    indegree = {c: 0 for c in first_seen}
    for c, targets in succ.items():
        for t in targets:
            indegree[t] += 1
    ready = sorted(
        (c for c, d in indegree.items() if d == 0), key=first_seen.__getitem__
    )
    order: list[str] = []
    while ready:
        current = ready.pop(0)
        order.append(current)
        for t in sorted(succ[current], key=first_seen.__getitem__):
            indegree[t] -= 1
            if indegree[t] == 0:
                ready.append(t)
        ready.sort(key=first_seen.__getitem__)
    return order


def _find_component_node(tree: EventTree, root: int, component_id: str) -> Node | None:
    stack = [root]
    while stack:
        node = tree.nodes[stack.pop()]
        if node.is_terminal:
            continue
        if node.component == component_id:
            return node
        stack.extend(child for _, child in reversed(node.edges))
    return None


def apply_reduction(tree: EventTree, directives) -> EventTree:
    """Rewrite the tree under each directive's prefix.

    The subtree below a prefix is replaced by the product of just the
    retained components, whose state sets are read off the existing
    subtree; with nothing retained the prefix ends in a terminal.  Paths
    outside every prefix are untouched.  Raises ConflictError when
    prefixes nest and DirectiveError when a prefix does not resolve or a
    retained component is absent below it.
    """
    if not directives:
        return tree
    _check_conflicts(directives)

    replacements: dict[tuple[int, int], list[tuple[str, list[str]]]] = {}
    for directive in directives:
        location = _resolve_prefix(tree, directive.prefix)
        node_index, edge_position = location
        subtree = tree.nodes[node_index].edges[edge_position][1]
        order = _subtree_component_order(tree, subtree)
        positions = []
        for component_id in directive.retain:
            if component_id not in order:
                raise DirectiveError(
                    f"retained component {component_id!r} does not appear below"
                    f" the prefix"
                )
            positions.append(order.index(component_id))
        if positions != sorted(positions):
            raise DirectiveError(
                "retain list must follow the branching order of the components"
            )
        chain: list[tuple[str, list[str]]] = []
        for component_id in directive.retain:
            node = _find_component_node(tree, subtree, component_id)
            chain.append((component_id, [state for state, _ in node.edges]))
        replacements[location] = chain

    new_nodes: list[Node] = []

    def build_chain(chain, level) -> int:
        index = len(new_nodes)
        if level == len(chain):
            new_nodes.append(Node(None))
            return index
        component_id, states = chain[level]
        node = Node(component_id)
        new_nodes.append(node)
        for state in states:
            node.edges.append((state, build_chain(chain, level + 1)))
        return index

    def copy(index: int) -> int:
        node = tree.nodes[index]
        new_index = len(new_nodes)
        if node.is_terminal:
            new_nodes.append(Node(None))
            return new_index
        new_node = Node(node.component)
        new_nodes.append(new_node)
        for position, (state, child) in enumerate(node.edges):
            if (index, position) in replacements:
                child_index = build_chain(replacements[(index, position)], 0)
            else:
                child_index = copy(child)
            new_node.edges.append((state, child_index))
        return new_index

    root = copy(tree.root)
    return EventTree(
        nodes=new_nodes,
        root=root,
        model_name=tree.model_name,
        model_hash=tree.model_hash,
        model=tree.model,
    )


# --------------------------------------------------------------------------
# Partitioning and probabilities
# --------------------------------------------------------------------------


def partition(paths: list[Path], query: PartitionQuery) -> PartitionResult:
    """Split path indices into the selected set and its complement."""
    count = len(paths)
    if query.mode == INDICES:
        bad = sorted(i for i in query.indices if not 0 <= i < count)
        if bad:
            raise PartitionError(
                f"path index {bad[0]} out of range for {count} paths"
            )
        selected = set(query.indices)
    elif query.mode == CONTAINS_ALL:
        selected = {
            p.index
            for p in paths
            if query.labels <= set(p.events)
        }
    else:
        selected = {
            p.index
            for p in paths
            if query.labels & set(p.events)
        }
    complement = [i for i in range(count) if i not in selected]
    return PartitionResult(tuple(sorted(selected)), tuple(complement))


def path_probability(path: Path, table: ProbabilityTable) -> float:
    """Product of the path's event probabilities; 1.0 for the empty path."""
    value = 1.0
    for event in path.events:
        value *= table.get(event.component, event.state)
    return value


def partition_probability(
    paths: list[Path], result: PartitionResult, table: ProbabilityTable
) -> tuple[float, float]:
    """Summed probability of the selected paths and of the complement.

    Both sums run in ascending path index order so repeated evaluations
    are bit-identical.
    """
    probabilities = [path_probability(p, table) for p in paths]
    selected = 0.0
    for index in result.selected:
        selected += probabilities[index]
    complement = 0.0
    for index in result.complement:
        complement += probabilities[index]
    return selected, complement


# --------------------------------------------------------------------------
# Redundancy transform
# --------------------------------------------------------------------------


def add_parallel_redundancy(
    model: SystemModel, directives, component_id: str
) -> tuple[SystemModel, list[ReductionDirective]]:
    """Replace a two-state component with a 1-out-of-2 pair.

    The component is duplicated in place: the original becomes id_1 and a
    copy id_2 sits immediately after it.  The first declared state is the
    success state, so the pair succeeds unless both copies are in the
    second state.  Directives are rewritten by expanding any prefix event
    on the old component over every state pair with the same combined
    outcome, and a truncation directive for the double failure is added so
    the pair's paths stop once the outcome is settled.  That truncation is
    rooted at the pair, so it is only added when the pair leads the
    branching order; deeper in the tree the rewritten directives already
    govern the double-failure continuation.
    """
    comp = model.component(component_id)
    if comp is None:
        raise UnknownComponentError(
            f"model declares no component {component_id!r}"
        )
    if len(comp.states) != 2:
        raise RedundancyError(
            f"component {component_id!r} has {len(comp.states)} states;"
            " the 1-out-of-2 transform needs exactly 2"
        )
    first_id = f"{component_id}_1"
    second_id = f"{component_id}_2"
    for existing in model.components:
        if existing.id in (first_id, second_id):
            raise RedundancyError(
                f"component id {existing.id!r} already taken; cannot duplicate"
                f" {component_id!r}"
            )
    success, failure = comp.states

    new_components: list[ComponentDef] = []
    for existing in model.components:
        if existing.id == component_id:
            new_components.append(
                ComponentDef(first_id, list(comp.states), comp.failure_rate)
            )
            new_components.append(
                ComponentDef(second_id, list(comp.states), comp.failure_rate)
            )
        else:
            new_components.append(
                ComponentDef(
                    existing.id, list(existing.states), existing.failure_rate
                )
            )
    new_model = SystemModel(model.name, new_components)

    # state pairs of the duplicated pair, grouped by their 1-out-of-2 outcome
    outcome_pairs = {
        success: [(success, success), (success, failure), (failure, success)],
        failure: [(failure, failure)],
    }

    def substitute_retain(retain):
        out = []
        for rid in retain:
            if rid == component_id:
                out.extend([first_id, second_id])
            else:
                out.append(rid)
        return tuple(out)

    rewritten: list[ReductionDirective] = []

    def add_directive(directive: ReductionDirective) -> None:
        if directive not in rewritten:
            rewritten.append(directive)

    for directive in directives:
        hit = None
        for position, event in enumerate(directive.prefix):
            if event.component == component_id:
                hit = (position, event)
                break
        if hit is None:
            add_directive(
                ReductionDirective(
                    tuple(directive.prefix), substitute_retain(directive.retain)
                )
            )
            continue
        position, event = hit
        if event.state not in (success, failure):
            raise DirectiveError(
                f"directive prefix event {event} names an undeclared state"
            )
        for first_state, second_state in outcome_pairs[event.state]:
            prefix = (
                directive.prefix[:position]
                + (
                    StateLabel(first_id, first_state),
                    StateLabel(second_id, second_state),
                )
                + directive.prefix[position + 1 :]
            )
            add_directive(
                ReductionDirective(prefix, substitute_retain(directive.retain))
            )
    if model.components[0].id == component_id:
        add_directive(
            ReductionDirective(
                (StateLabel(first_id, failure), StateLabel(second_id, failure)), ()
            )
        )
    return new_model, rewritten


def expand_probability_table(
    table: ProbabilityTable, component_id: str
) -> ProbabilityTable:
    """Copy a duplicated component's entries onto its _1 and _2 copies."""
    entries: dict[tuple[str, str], float] = {}
    for (component, state), p in table.entries.items():
        if component == component_id:
            entries[(f"{component_id}_1", state)] = p
            entries[(f"{component_id}_2", state)] = p
        else:
            entries[(component, state)] = p
    return ProbabilityTable(entries, table.tolerance)


# --------------------------------------------------------------------------
# JSON documents
# --------------------------------------------------------------------------


def tree_to_doc(tree: EventTree) -> dict:
    nodes = []
    for node in tree.nodes:
        if node.is_terminal:
            nodes.append({"kind": "terminal"})
        else:
            nodes.append(
                {
                    "kind": "component",
                    "component": node.component,
                    "edges": [
                        {"state": state, "child": child}
                        for state, child in node.edges
                    ],
                }
            )
    return {
        "format": TREE_FORMAT,
        "model": {"name": tree.model_name, "hash": tree.model_hash},
        "root": tree.root,
        "nodes": nodes,
    }


def tree_from_doc(doc: dict, model: SystemModel | None = None) -> EventTree:
    tag = doc.get("format") if isinstance(doc, dict) else None
    if tag != TREE_FORMAT:
        raise DocumentError(
            f"unsupported format tag {tag!r}, expected {TREE_FORMAT!r}", "format"
        )
    reference = doc.get("model")
    if not isinstance(reference, dict):
        raise DocumentError("expected an object", "model")
    name = reference.get("name")
    content_hash = reference.get("hash")
    if not isinstance(name, str) or not isinstance(content_hash, str):
        raise DocumentError("model reference needs name and hash", "model")
    if model is not None and model_content_hash(model) != content_hash:
        raise DocumentError(
            "supplied model does not match the tree's model hash", "model.hash"
        )
    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise DocumentError("expected a non-empty list", "nodes")
    nodes: list[Node] = []
    for i, item in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        kind = item.get("kind") if isinstance(item, dict) else None
        if kind == "terminal":
            nodes.append(Node(None))
        elif kind == "component":
            component = item.get("component")
            if not isinstance(component, str) or not component:
                raise DocumentError(
                    "component node needs a component id", f"{where}.component"
                )
            edges = item.get("edges")
            if not isinstance(edges, list) or not edges:
                raise DocumentError(
                    "component node needs a non-empty edge list", f"{where}.edges"
                )
            node = Node(component)
            for j, edge in enumerate(edges):
                state = edge.get("state") if isinstance(edge, dict) else None
                child = edge.get("child") if isinstance(edge, dict) else None
                if not isinstance(state, str) or not isinstance(child, int):
                    raise DocumentError(
                        "edge needs a state and a child index",
                        f"{where}.edges[{j}]",
                    )
                if not 0 <= child < len(raw_nodes):
                    raise DocumentError(
                        f"child index {child} out of range",
                        f"{where}.edges[{j}].child",
                    )
                node.edges.append((state, child))
            nodes.append(node)
        else:
            raise DocumentError(
                f"unknown node kind {kind!r}", f"{where}.kind"
            )
    root = doc.get("root")
    if not isinstance(root, int) or not 0 <= root < len(nodes):
        raise DocumentError("root must be a valid node index", "root")
    return EventTree(
        nodes=nodes, root=root, model_name=name, model_hash=content_hash, model=model
    )


def _label_from_doc(item, where) -> StateLabel:
    if isinstance(item, dict):
        component = item.get("component")
        state = item.get("state")
        if not isinstance(component, str) or not isinstance(state, str):
            raise DocumentError("event needs component and state strings", where)
        return StateLabel(component, state)
    if isinstance(item, str) and "_" in item:
        component, state = item.rsplit("_", 1)
        if component and state:
            return StateLabel(component, state)
    raise DocumentError(
        "event must be {component, state} or a component_state string", where
    )


def directives_to_doc(directives) -> dict:
    return {
        "format": DIRECTIVES_FORMAT,
        "directives": [
            {
                "prefix": [
                    {"component": ev.component, "state": ev.state}
                    for ev in d.prefix
                ],
                "retain": list(d.retain),
            }
            for d in directives
        ],
    }


def directives_from_doc(doc: dict) -> list[ReductionDirective]:
    tag = doc.get("format") if isinstance(doc, dict) else None
    if tag != DIRECTIVES_FORMAT:
        raise DocumentError(
            f"unsupported format tag {tag!r}, expected {DIRECTIVES_FORMAT!r}",
            "format",
        )
    raw = doc.get("directives")
    if not isinstance(raw, list):
        raise DocumentError("expected a list", "directives")
    directives = []
    for i, item in enumerate(raw):
        where = f"directives[{i}]"
        if not isinstance(item, dict):
            raise DocumentError("expected an object", where)
        raw_prefix = item.get("prefix")
        if not isinstance(raw_prefix, list) or not raw_prefix:
            raise DocumentError("prefix must be a non-empty list", f"{where}.prefix")
        prefix = tuple(
            _label_from_doc(ev, f"{where}.prefix[{j}]")
            for j, ev in enumerate(raw_prefix)
        )
        raw_retain = item.get("retain", [])
        if not isinstance(raw_retain, list) or any(
            not isinstance(r, str) for r in raw_retain
        ):
            raise DocumentError(
                "retain must be a list of component ids", f"{where}.retain"
            )
        try:
            directives.append(ReductionDirective(prefix, tuple(raw_retain)))
        except DirectiveError as exc:
            raise DocumentError(str(exc), where) from None
    return directives


def parse_index_values(values) -> set[int]:
    """Accept path indices as ints, "7", "7-10" ranges, or comma-joined
    strings of either, e.g. ["3", "5-8"] or "3,5,7-10"."""
    indices: set[int] = set()

    def take(text: str) -> None:
        text = text.strip()
        if not text:
            raise PartitionError("empty index entry")
        low_text, sep, high_text = text.partition("-")
        if sep and low_text:
            try:
                low, high = int(low_text), int(high_text)
            except ValueError:
                raise PartitionError(f"bad index range {text!r}") from None
            if high < low:
                raise PartitionError(f"bad index range {text!r}")
            indices.update(range(low, high + 1))
        else:
            try:
                indices.add(int(text))
            except ValueError:
                raise PartitionError(f"bad index {text!r}") from None

    for value in values if isinstance(values, list) else [values]:
        if isinstance(value, bool):
            raise PartitionError(f"bad index {value!r}")
        if isinstance(value, int):
            indices.add(value)
        elif isinstance(value, str):
            for part in value.split(","):
                take(part)
        else:
            raise PartitionError(f"bad index {value!r}")
    if any(i < 0 for i in indices):
        raise PartitionError("path indices must be non-negative")
    return indices


def partition_query_to_doc(query: PartitionQuery) -> dict:
    if query.mode == INDICES:
        values: list = sorted(query.indices)
    else:
        values = sorted(label.compact() for label in query.labels)
    return {"mode": query.mode, "values": values}


def partition_query_from_doc(doc: dict) -> PartitionQuery:
    if not isinstance(doc, dict):
        raise DocumentError("expected an object", "partition")
    mode = doc.get("mode")
    if mode not in _PARTITION_MODES:
        raise DocumentError(f"unknown partition mode {mode!r}", "mode")
    values = doc.get("values")
    if not isinstance(values, list):
        raise DocumentError("values must be a list", "values")
    if mode == INDICES:
        return PartitionQuery.by_indices(parse_index_values(values))
    labels = [
        _label_from_doc(item, f"values[{i}]") for i, item in enumerate(values)
    ]
    if mode == CONTAINS_ALL:
        return PartitionQuery.contains_all(labels)
    return PartitionQuery.contains_any(labels)
