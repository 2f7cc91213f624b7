"""HTTP service exposing the workbench over JSON.

Sessions are the unit of state: one uploaded model, the directive sets
applied so far, the probability table, and the evaluations recorded for
the histogram.  Each session is one JSON file under the data directory,
written through on every mutation, so a restarted server picks up where
it left off.  Trees are rebuilt from the stored model and directives on
demand rather than persisted; they are cheap and this keeps the store
canonical.

Session ids start with a hash prefix of the model document, so two
different models can never be confused even across data directories; the
rest of the id is random.  Mutations to one session are serialized with a
per-session lock.
"""

from __future__ import annotations

import json
import re
import random
import threading
import time
from pathlib import Path as FsPath

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import engine, render
from .errors import (
    ConflictError,
    EtmaError,
    UnknownComponentError,
)
from .model import (
    SystemModel,
    has_errors,
    model_content_hash,
    model_from_doc,
    model_to_doc,
    table_from_doc,
    table_to_doc,
    validate_model,
    validate_probabilities,
)

SESSION_FORMAT = "etma-session/1"

_ID_PATTERN = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{12}$")


class SessionNotFound(EtmaError):
    pass


class SessionState(EtmaError):
    """The request needs the session in a state it is not in, e.g. a tree
    before one was generated."""


class SessionStore:
    """JSON-file-per-session persistence with per-session write locks."""

    def __init__(self, root: str | FsPath, token_seed: int | None = None):
        self.root = FsPath(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._rng = random.Random(token_seed) if token_seed is not None else None
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> FsPath:
        return self.root / f"{session_id}.json"

    def _token(self) -> str:
        rng = self._rng if self._rng is not None else random.SystemRandom()
        return f"{rng.getrandbits(48):012x}"

    def create(self, model_doc: dict, model: SystemModel) -> dict:
        prefix = model_content_hash(model).split(":", 1)[1][:8]
        while True:
            session_id = f"{prefix}-{self._token()}"
            if not self._path(session_id).exists():
                break
        record = {
            "format": SESSION_FORMAT,
            "id": session_id,
            "created": time.time(),
            "model": model_doc,
            "directive_sets": [],
            "table": None,
            "generated": False,
            "evaluations": [],
            "history": [{"action": "create", "at": time.time()}],
        }
        self._write(record)
        return record

    def load(self, session_id: str) -> dict:
        if not _ID_PATTERN.match(session_id):
            raise SessionNotFound(f"no session {session_id!r}")
        path = self._path(session_id)
        if not path.exists():
            raise SessionNotFound(f"no session {session_id!r}")
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)

    def _write(self, record: dict) -> None:
        path = self._path(record["id"])
        blob = json.dumps(record, indent=2) + "\n"
        temp = path.with_suffix(".tmp")
        with open(temp, "w", encoding="utf-8") as handle:
            handle.write(blob)
        temp.replace(path)

    def mutate(self, session_id: str, action, note: str) -> dict:
        """Read-modify-write one session under its lock.

        ``action`` gets the record and may return a response payload; the
        record is persisted afterwards with ``note`` appended to history.
        """
        with self._lock(session_id):
            record = self.load(session_id)
            result = action(record)
            record["history"].append({"action": note, "at": time.time()})
            self._write(record)
        return result


def _session_model(record: dict) -> SystemModel:
    return model_from_doc(record["model"])


def _session_tree(record: dict) -> engine.EventTree:
    if not record.get("generated"):
        raise SessionState("no tree yet; POST generate first")
    tree = engine.generate_complete(_session_model(record))
    for doc in record["directive_sets"]:
        tree = engine.apply_reduction(tree, engine.directives_from_doc(doc))
    return tree


def _session_table(record: dict, model: SystemModel):
    if record.get("table") is None:
        raise SessionState("no probability table yet; supply probs on evaluate")
    table = table_from_doc(record["table"])
    report = validate_probabilities(model, table)
    if has_errors(report):
        raise SessionState("stored probability table no longer fits the model")
    return table


def _evaluate_tree(tree, table, partition_doc):
    query = engine.partition_query_from_doc(partition_doc)
    paths = engine.enumerate_paths(tree)
    result = engine.partition(paths, query)
    p_selected, p_complement = engine.partition_probability(paths, result, table)
    return result, p_selected, p_complement


def create_app(
    data_dir: str | FsPath,
    cors_origin: str | None = None,
    static_dir: str | FsPath | None = None,
    token_seed: int | None = None,
) -> FastAPI:
    app = FastAPI(title="etma", docs_url=None, redoc_url=None)
    store = SessionStore(data_dir, token_seed=token_seed)
    app.state.store = store

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(EtmaError)
    def _domain_error(_request, exc: EtmaError):
        if isinstance(exc, (SessionNotFound, UnknownComponentError)):
            status = 404
        elif isinstance(exc, (ConflictError, SessionState)):
            status = 409
        else:
            status = 422
        return JSONResponse({"error": str(exc)}, status_code=status)

    def _artifact_tree(record: dict) -> engine.EventTree:
        # artifacts simply do not exist until a tree was generated
        if not record.get("generated"):
            raise SessionNotFound("no tree generated yet")
        return _session_tree(record)

    async def _body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            return None
        return data if isinstance(data, dict) else None

    def _bad_request(message: str) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=400)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/models", status_code=201)
    async def create_model(request: Request):
        doc = await _body(request)
        if doc is None:
            return _bad_request("body must be a JSON object")
        model = model_from_doc(doc)
        report = validate_model(model)
        if has_errors(report):
            return JSONResponse(
                {
                    "error": "model failed validation",
                    "violations": [
                        {
                            "severity": v.severity,
                            "code": v.code,
                            "message": v.message,
                            "component": v.component,
                            "state": v.state,
                        }
                        for v in report
                    ],
                },
                status_code=422,
            )
        record = store.create(doc, model)
        return {"id": record["id"]}

    @app.get("/api/models/{session_id}")
    def session_summary(session_id: str):
        record = store.load(session_id)
        path_count = None
        if record.get("generated"):
            path_count = engine.count_paths(_session_tree(record))
        return {
            "id": record["id"],
            "model_name": record["model"].get("name"),
            "generated": bool(record.get("generated")),
            "directive_sets": len(record["directive_sets"]),
            "path_count": path_count,
            "has_table": record.get("table") is not None,
            "evaluations": record["evaluations"],
            "history": record["history"],
        }

    def _tree_summary(record: dict) -> dict:
        tree = _session_tree(record)
        session_id = record["id"]
        return {
            "path_count": engine.count_paths(tree),
            "dot_url": f"/api/models/{session_id}/tree.dot",
            "paths_url": f"/api/models/{session_id}/paths",
        }

    @app.post("/api/models/{session_id}/generate")
    def generate(session_id: str):
        def action(record):
            record["generated"] = True
            record["directive_sets"] = []
            return _tree_summary(record)

        return store.mutate(session_id, action, "generate")

    @app.post("/api/models/{session_id}/reduce")
    async def reduce(session_id: str, request: Request):
        doc = await _body(request)
        if doc is None:
            return _bad_request("body must be a directives document")

        def action(record):
            tree = _session_tree(record)
            directives = engine.directives_from_doc(doc)
            engine.apply_reduction(tree, directives)  # raises before we store
            record["directive_sets"].append(doc)
            return _tree_summary(record)

        return store.mutate(session_id, action, "reduce")

    @app.post("/api/models/{session_id}/evaluate")
    async def evaluate(session_id: str, request: Request):
        doc = await _body(request)
        if doc is None or "partition" not in doc:
            return _bad_request("body must carry a partition document")

        def action(record):
            model = _session_model(record)
            if doc.get("probs") is not None:
                table = table_from_doc(doc["probs"])
                report = validate_probabilities(model, table)
                if has_errors(report):
                    raise SessionState(
                        "probability table failed validation: "
                        + "; ".join(
                            v.message for v in report if v.severity == "error"
                        )
                    )
                record["table"] = doc["probs"]
            table = _session_table(record, model)
            tree = _session_tree(record)
            result, p_selected, p_complement = _evaluate_tree(
                tree, table, doc["partition"]
            )
            label = doc.get("label") or f"eval_{len(record['evaluations']) + 1}"
            record["evaluations"].append(
                {"label": label, "p_selected": p_selected}
            )
            return {
                "p_selected": p_selected,
                "p_complement": p_complement,
                "selected_indices": list(result.selected),
            }

        return store.mutate(session_id, action, "evaluate")

    @app.post("/api/models/{session_id}/whatif")
    async def whatif(session_id: str, request: Request):
        doc = await _body(request)
        if doc is None or not isinstance(doc.get("duplicate"), str):
            return _bad_request("body must name the component to duplicate")
        record = store.load(session_id)
        model = _session_model(record)
        directives = []
        for ds in record["directive_sets"]:
            directives.extend(engine.directives_from_doc(ds))
        new_model, new_directives = engine.add_parallel_redundancy(
            model, directives, doc["duplicate"]
        )
        new_tree = engine.apply_reduction(
            engine.generate_complete(new_model), new_directives
        )
        comparisons = doc.get("partitions") or []
        results = []
        if comparisons:
            table = _session_table(record, model)
            new_table = engine.expand_probability_table(table, doc["duplicate"])
            before_tree = _session_tree(record)
            for i, item in enumerate(comparisons):
                if not isinstance(item, dict) or "before" not in item or "after" not in item:
                    raise SessionState(
                        f"partitions[{i}] needs before and after queries"
                    )
                _, before_p, _ = _evaluate_tree(before_tree, table, item["before"])
                _, after_p, _ = _evaluate_tree(new_tree, new_table, item["after"])
                results.append(
                    {
                        "label": item.get("label") or f"comparison_{i + 1}",
                        "before": before_p,
                        "after": after_p,
                        "delta": after_p - before_p,
                    }
                )
        new_record = store.create(model_to_doc(new_model), new_model)

        def seed(new):
            new["directive_sets"] = [engine.directives_to_doc(new_directives)]
            new["generated"] = True
            if record.get("table") is not None:
                new["table"] = table_to_doc(
                    engine.expand_probability_table(
                        table_from_doc(record["table"]), doc["duplicate"]
                    )
                )
            return None

        store.mutate(new_record["id"], seed, f"whatif:{doc['duplicate']}")
        return {
            "id": new_record["id"],
            "path_count": engine.count_paths(new_tree),
            "results": results,
        }

    @app.get("/api/models/{session_id}/tree.json")
    def tree_json(session_id: str):
        record = store.load(session_id)
        return engine.tree_to_doc(_artifact_tree(record))

    @app.get("/api/models/{session_id}/tree.dot")
    def tree_dot(session_id: str):
        record = store.load(session_id)
        tree = _artifact_tree(record)
        dot = render.to_dot(
            tree, render.RenderOptions(include_path_indices=True)
        )
        return PlainTextResponse(dot)

    @app.get("/api/models/{session_id}/paths")
    def paths_text(session_id: str):
        record = store.load(session_id)
        tree = _artifact_tree(record)
        return PlainTextResponse(render.paths_report(engine.enumerate_paths(tree)))

    @app.get("/api/models/{session_id}/paths.json")
    def paths_json(session_id: str):
        record = store.load(session_id)
        tree = _artifact_tree(record)
        return {
            "paths": [
                {
                    "index": path.index,
                    "events": [
                        {"component": ev.component, "state": ev.state}
                        for ev in path.events
                    ],
                }
                for path in engine.enumerate_paths(tree)
            ]
        }

    @app.get("/api/models/{session_id}/histogram.csv")
    def histogram(session_id: str):
        record = store.load(session_id)
        if not record.get("generated"):
            raise SessionNotFound("no tree generated yet")
        rows = [
            (entry["label"], entry["p_selected"])
            for entry in record["evaluations"]
        ]
        return PlainTextResponse(
            render.histogram_data(rows), media_type="text/csv"
        )

    if static_dir is not None and FsPath(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True))

    return app
