"""Presentation helpers: DOT graphs, path listings, histogram CSV.

All output here is deterministic for a given input.  Nodes are emitted in
arena index order and numeric cells use the shortest decimal string that
round-trips, so regenerated artifacts diff clean.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .engine import EventTree, Path, path_probability, terminal_path_indices
from .model import ProbabilityTable

HISTOGRAM_HEADER = ("label", "probability_percent")


@dataclass
class RenderOptions:
    label_style: str = "compact"  # "compact" -> CT_O, "full" -> CT=O
    include_path_indices: bool = False
    include_probabilities: bool = False

    def edge_label(self, component: str, state: str) -> str:
        if self.label_style == "full":
            return f"{component}={state}"
        return f"{component}_{state}"


def to_dot(
    tree: EventTree,
    options: RenderOptions | None = None,
    table: ProbabilityTable | None = None,
) -> str:
    """Graphviz source for a tree, left to right, one node per arena slot.

    Component nodes are ellipses labeled with the component id; terminals
    are boxes, optionally labeled with their path index and probability.
    """
    options = options or RenderOptions()
    if options.include_probabilities and table is None:
        raise ValueError("include_probabilities needs a probability table")
    path_index = terminal_path_indices(tree)
    path_by_index: dict[int, Path] = {}
    if options.include_probabilities:
        from .engine import enumerate_paths

        for path in enumerate_paths(tree):
            path_by_index[path.index] = path
    lines = [f'digraph "{tree.model_name}" {{', "  rankdir=LR;"]
    for index, node in enumerate(tree.nodes):
        if node.is_terminal:
            pieces = []
            if options.include_path_indices:
                pieces.append(f"Path_{path_index[index]}")
            if options.include_probabilities:
                path = path_by_index[path_index[index]]
                pieces.append(repr(path_probability(path, table)))
            label = "\\n".join(pieces)
            lines.append(f'  {index} [shape=box, label="{label}"];')
        else:
            lines.append(f'  {index} [shape=ellipse, label="{node.component}"];')
    for index, node in enumerate(tree.nodes):
        for state, child in node.edges:
            label = options.edge_label(node.component, state)
            lines.append(f'  {index} -> {child} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def paths_report(paths: list[Path], table: ProbabilityTable | None = None) -> str:
    """Numbered listing, one path per line:

        Path_4 = [CT_O, R_O, TC1_O, TC2_F, CB1_O]

    With a table, a probability column is appended to each line.
    """
    lines = []
    for path in paths:
        events = ", ".join(ev.compact() for ev in path.events)
        line = f"Path_{path.index} = [{events}]"
        if table is not None:
            line += f"  p={path_probability(path, table)!r}"
        lines.append(line)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def histogram_data(rows: list[tuple[str, float]]) -> str:
    """CSV of labeled probabilities, as percentages.

    Header only when there are no rows yet.  Values use repr so the exact
    double can be recovered from the file.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(HISTOGRAM_HEADER)
    for label, probability in rows:
        writer.writerow([label, repr(probability * 100.0)])
    return buffer.getvalue()
