"""Command line front end.

Exit codes: 0 on success, 1 when the input fails validation (bad model,
conflicting directives, unsatisfiable partition), 2 for usage errors such
as missing files or unknown flags, 3 for internal faults.  Results go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import engine, render
from .errors import EtmaError
from .model import (
    has_errors,
    model_from_doc,
    model_to_doc,
    table_from_doc,
    validate_model,
    validate_probabilities,
)
from .oracle import oracle_brute_force

ORACLE_TOLERANCE = 1e-12


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def format_index_ranges(indices) -> str:
    """Compress sorted indices to the a-b,c notation used in reports."""
    indices = sorted(indices)
    parts = []
    i = 0
    while i < len(indices):
        j = i
        while j + 1 < len(indices) and indices[j + 1] == indices[j] + 1:
            j += 1
        if j - i >= 2:
            parts.append(f"{indices[i]}-{indices[j]}")
        else:
            parts.extend(str(indices[k]) for k in range(i, j + 1))
        i = j + 1
    return ",".join(parts)


def _print_violations(report) -> None:
    for violation in report:
        print(f"{violation.severity}: {violation.message}")


def _print_probability(name: str, value: float) -> None:
    print(f"{name} = {value!r} ({value * 100.0:.15f}%)")


def cmd_validate(args) -> int:
    model = model_from_doc(_read_json(args.model))
    report = list(validate_model(model))
    if args.probs:
        table = table_from_doc(_read_json(args.probs))
        report.extend(validate_probabilities(model, table))
    if report:
        _print_violations(report)
    else:
        print("OK")
    print(
        "note: state sets are taken as exhaustive; that is the modeler's"
        " attestation, not a checked property",
        file=sys.stderr,
    )
    return 1 if has_errors(report) else 0


def _emit_tree(tree, args) -> None:
    if args.out:
        _write_json(args.out, engine.tree_to_doc(tree))
    if args.dot:
        _write_text(
            args.dot,
            render.to_dot(tree, render.RenderOptions(include_path_indices=True)),
        )
    if args.paths:
        sys.stdout.write(render.paths_report(engine.enumerate_paths(tree)))


def cmd_generate(args) -> int:
    model = model_from_doc(_read_json(args.model))
    tree = engine.generate_complete(model)
    print(f"path_count = {engine.count_paths(tree)}", file=sys.stderr)
    _emit_tree(tree, args)
    return 0


def cmd_reduce(args) -> int:
    tree = engine.tree_from_doc(_read_json(args.tree))
    directives = engine.directives_from_doc(_read_json(args.directives))
    reduced = engine.apply_reduction(tree, directives)
    print(f"path_count = {engine.count_paths(reduced)}", file=sys.stderr)
    _emit_tree(reduced, args)
    return 0


def cmd_partition(args) -> int:
    tree = engine.tree_from_doc(_read_json(args.tree))
    query = engine.partition_query_from_doc(_read_json(args.partition))
    paths = engine.enumerate_paths(tree)
    result = engine.partition(paths, query)
    print(f"selected = {format_index_ranges(result.selected)}")
    print(f"complement = {format_index_ranges(result.complement)}")
    print(f"selected_count = {len(result.selected)}")
    return 0


def _evaluate(tree, table, query, csv_path=None, label="selected"):
    paths = engine.enumerate_paths(tree)
    result = engine.partition(paths, query)
    p_selected, p_complement = engine.partition_probability(paths, result, table)
    print(f"selected = {format_index_ranges(result.selected)}")
    _print_probability("p_selected", p_selected)
    _print_probability("p_complement", p_complement)
    if csv_path:
        _write_text(csv_path, render.histogram_data([(label, p_selected)]))
    return result, p_selected, p_complement


def cmd_eval(args) -> int:
    tree = engine.tree_from_doc(_read_json(args.tree))
    table = table_from_doc(_read_json(args.probs))
    query = engine.partition_query_from_doc(_read_json(args.partition))
    _, p_selected, _ = _evaluate(tree, table, query, args.csv, args.label)
    if args.oracle:
        if not args.model:
            print("--oracle needs --model (and usually --directives)", file=sys.stderr)
            return 2
        model = model_from_doc(_read_json(args.model))
        directives = (
            engine.directives_from_doc(_read_json(args.directives))
            if args.directives
            else []
        )
        check = oracle_brute_force(model, directives, table, query)
        print(f"oracle = {check!r}")
        if abs(check - p_selected) > ORACLE_TOLERANCE:
            print(
                f"internal error: engine and exhaustive check disagree by"
                f" {abs(check - p_selected)!r}",
                file=sys.stderr,
            )
            return 3
    return 0


def cmd_whatif(args) -> int:
    model = model_from_doc(_read_json(args.model))
    directives = engine.directives_from_doc(_read_json(args.directives))
    new_model, new_directives = engine.add_parallel_redundancy(
        model, directives, args.duplicate
    )
    if args.out_model:
        _write_json(args.out_model, model_to_doc(new_model))
    if args.out_directives:
        _write_json(args.out_directives, engine.directives_to_doc(new_directives))
    tree = engine.apply_reduction(
        engine.generate_complete(new_model), new_directives
    )
    print(f"duplicated {args.duplicate} into {args.duplicate}_1, {args.duplicate}_2")
    print(f"path_count = {engine.count_paths(tree)}")
    if args.probs and args.partition:
        table = engine.expand_probability_table(
            table_from_doc(_read_json(args.probs)), args.duplicate
        )
        query = engine.partition_query_from_doc(_read_json(args.partition))
        _evaluate(tree, table, query, args.csv, args.label)
    elif args.probs or args.partition:
        print("evaluation needs both --probs and --partition", file=sys.stderr)
        return 2
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    data_dir = args.data_dir or os.environ.get("ETMA_DATA_DIR") or "etma-data"
    app = create_app(data_dir, cors_origin=args.cors_origin, static_dir=args.static)
    print(f"data dir: {data_dir}", file=sys.stderr)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"server failed to start: {exc}", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etma",
        description="Build, reduce, and evaluate event trees over system models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model and optional probabilities")
    p.add_argument("model")
    p.add_argument("probs", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="build the complete tree for a model")
    p.add_argument("model")
    p.add_argument("--out", help="write the tree document here")
    p.add_argument("--dot", help="write Graphviz source here")
    p.add_argument("--paths", action="store_true", help="print the path listing")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="apply reduction directives to a tree")
    p.add_argument("tree")
    p.add_argument("directives")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.add_argument("--paths", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("partition", help="split a tree's paths by a query")
    p.add_argument("tree")
    p.add_argument("partition")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("eval", help="probability of a partition of a tree")
    p.add_argument("tree")
    p.add_argument("probs")
    p.add_argument("partition")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the exhaustive outcome enumeration")
    p.add_argument("--model", help="model document, needed for --oracle")
    p.add_argument("--directives", help="directives document for --oracle")
    p.add_argument("--csv", help="write a one-row histogram CSV here")
    p.add_argument("--label", default="selected", help="label for the CSV row")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "whatif", help="duplicate a component 1-out-of-2 and re-evaluate"
    )
    p.add_argument("model")
    p.add_argument("directives")
    p.add_argument("--duplicate", required=True, metavar="COMPONENT")
    p.add_argument("--out-model")
    p.add_argument("--out-directives")
    p.add_argument("--probs")
    p.add_argument("--partition")
    p.add_argument("--csv")
    p.add_argument("--label", default="selected")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8001)
    p.add_argument("--data-dir", help="session store (or ETMA_DATA_DIR)")
    p.add_argument("--cors-origin", help="allow this browser origin")
    p.add_argument("--static", help="serve this directory at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        status = args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"malformed JSON: {exc}", file=sys.stderr)
        return 1
    except EtmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - kept for field diagnostics
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - started
    print(f"done in {elapsed:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
