"""The Semantic Auto Store service: seeded catalog, agents, profiles, events.

One process, one store. Readers work against the current graph reference;
imports build a copy and swap it atomically under the state lock, then
persist a snapshot. Wall time never reaches the domain model: the service
hands out logical clock ticks at its boundary.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import agents, capture, schema, serialize, snap
from .capture import CaptureReport
from .triples import Graph, Iri

SNAPSHOT_NAME = "snapshot.nt"


class SeedError(RuntimeError):
    """Capture pipeline failed while seeding; carries the report."""

    def __init__(self, report: CaptureReport) -> None:
        self.report = report
        lines = [
            f"{s.name}: {s.status.value}" + (f" ({'; '.join(s.messages)})" if s.messages else "")
            for s in report.stages
        ]
        super().__init__("seeding failed:\n" + "\n".join(lines))


def _default_seed(name: str) -> Path:
    return Path(str(resources.files("semstore.data").joinpath(name)))


@dataclass(slots=True)
class SeedFiles:
    summary: Path
    terms: Path
    schematic: Path
    rules: Path

    @classmethod
    def packaged(cls) -> "SeedFiles":
        return cls(
            summary=_default_seed("summary.txt"),
            terms=_default_seed("terms.csv"),
            schematic=_default_seed("catalog.onts"),
            rules=_default_seed("rules.txt"),
        )


@dataclass(slots=True)
class ServiceConfig:
    port: int = 8075
    data_dir: Path = Path("data")
    seed_files: SeedFiles = field(default_factory=SeedFiles.packaged)
    scoring: agents.ScoringWeights = field(default_factory=agents.ScoringWeights)
    ui_dir: Path | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside [1, 65535]")
        override = os.environ.get("STORE_DATA_DIR")
        if override:
            self.data_dir = Path(override)

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        base = Path(path).resolve().parent
        seeds = SeedFiles.packaged()
        for key in ("summary", "terms", "schematic", "rules"):
            if key in raw.get("seed_files", {}):
                setattr(seeds, key, base / raw["seed_files"][key])
        weights = agents.ScoringWeights(**raw.get("scoring", {}))
        return cls(
            port=raw.get("port", 8075),
            data_dir=base / raw.get("data_dir", "data"),
            seed_files=seeds,
            scoring=weights,
            ui_dir=(base / raw["ui_dir"]) if raw.get("ui_dir") else None,
        )


def seed_store(config: ServiceConfig) -> Graph:
    """Build the catalog graph by running the capture pipeline on the seeds."""
    graph, report = capture.run_capture_pipeline(
        config.seed_files.summary.read_text(encoding="utf-8"),
        config.seed_files.terms.read_text(encoding="utf-8"),
        config.seed_files.schematic.read_text(encoding="utf-8"),
        Iri("store:"),
    )
    if not report.ok:
        raise SeedError(report)
    return graph


def snapshot(graph: Graph, data_dir: Path) -> Path:
    """Persist canonical triples atomically (write temp file, then rename)."""
    data_dir.mkdir(parents=True, exist_ok=True)
    target = data_dir / SNAPSHOT_NAME
    fd, tmp_name = tempfile.mkstemp(dir=data_dir, prefix=".snapshot-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(serialize.emit_triples(graph))
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def load_snapshot(data_dir: Path) -> Graph:
    """Rebuild the exact graph from the snapshot file."""
    return serialize.parse_triples((data_dir / SNAPSHOT_NAME).read_text(encoding="utf-8"))


@dataclass(slots=True)
class ConsumerProfile:
    consumer_id: str
    current: snap.Situation
    history: list[snap.Situation] = field(default_factory=list)


class StoreState:
    """Mutable service state; the lock serializes writers, readers are lock-free."""

    def __init__(self, config: ServiceConfig) -> None:
        self.config = config
        self.lock = threading.Lock()
        # held across a whole import (copy, merge, swap) so imports serialize
        self.import_lock = threading.Lock()
        if (config.data_dir / SNAPSHOT_NAME).exists():
            self.graph = load_snapshot(config.data_dir)
        else:
            self.graph = seed_store(config)
        self.rules = snap.parse_rules(config.seed_files.rules.read_text(encoding="utf-8"))
        self.profiles: dict[str, ConsumerProfile] = {}
        self.events: list[snap.Event] = []
        self._clock = 0
        self._index = agents.index_labels(self.graph)

    def index(self) -> agents.LabelIndex:
        graph = self.graph
        if self._index.version != graph.version:
            with self.lock:
                if self._index.version != self.graph.version:
                    self._index = agents.index_labels(self.graph)
        return self._index

    def tick(self) -> int:
        self._clock += 1
        return self._clock

    def log_event(self, kind: snap.EventKind, name: str, payload: dict[str, str]) -> snap.Event:
        with self.lock:
            event = snap.Event(
                kind=kind,
                name=name,
                timestamp=self.tick(),
                payload=tuple(sorted((str(k), str(v)) for k, v in payload.items())),
            )
            self.events = snap.record_event(self.events, event)
            return event

    def swap_graph(self, new_graph: Graph) -> None:
        with self.lock:
            self.graph = new_graph
        snapshot(new_graph, self.config.data_dir)


class ApiError(Exception):
    """Request-level failure with a stable machine-readable code."""

    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code


class SearchBody(BaseModel):
    q: str
    limit: int = 25


class FluentBody(BaseModel):
    category: str
    key: str
    value: str


class EventBody(BaseModel):
    kind: str
    name: str
    payload: dict[str, str] = {}


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _search_payload(results: list[agents.SearchResult]) -> dict:
    return {
        "results": [
            {
                "iri": r.iri.value,
                "score": float(r.score),
                "matched_via": r.matched_via.value,
                "rank": r.rank,
            }
            for r in results
        ]
    }


def create_app(config: ServiceConfig | None = None, state: StoreState | None = None) -> FastAPI:
    state = state or StoreState(config or ServiceConfig())
    app = FastAPI(title="Semantic Auto Store", docs_url=None, redoc_url=None)
    app.state.store = state

    @app.exception_handler(ApiError)
    async def on_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return _error(exc.status, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def on_validation(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "invalid_request", str(exc.errors()[:1]))

    @app.exception_handler(agents.EmptyQueryError)
    async def on_empty_query(_request: Request, exc: agents.EmptyQueryError) -> JSONResponse:
        return _error(400, "empty_query", str(exc))

    @app.exception_handler(agents.NotFoundError)
    async def on_not_found(_request: Request, exc: agents.NotFoundError) -> JSONResponse:
        return _error(404, "not_found", str(exc))

    @app.exception_handler(serialize.TripleParseError)
    async def on_parse_error(_request: Request, exc: serialize.TripleParseError) -> JSONResponse:
        return _error(400, "parse_error", str(exc))

    def run_search(q: str, limit: int) -> dict:
        graph = state.graph
        results = agents.search(state.index(), graph, q, limit, state.config.scoring)
        state.log_event(snap.EventKind.ACTION, "search", {"q": q})
        return _search_payload(results)

    @app.get("/api/search")
    def search_get(q: str = "", limit: int = 25) -> dict:
        return run_search(q, limit)

    @app.post("/api/search")
    def search_post(body: SearchBody) -> dict:
        return run_search(body.q, body.limit)

    @app.get("/api/ontology/describe")
    def describe(iri: str) -> dict:
        graph = state.graph
        desc = agents.describe(graph, Iri(iri))
        return {
            "iri": desc.iri.value,
            "label": desc.label,
            "types": [i.value for i in desc.types],
            "superclasses": [i.value for i in desc.superclasses],
            "subclasses": [i.value for i in desc.subclasses],
            "instances": [i.value for i in desc.instances],
            "relations": [{"predicate": p.value, "object": o.value} for p, o in desc.relations],
            "attributes": [{"predicate": p.value, "value": lit.lexical} for p, lit in desc.attributes],
        }

    @app.get("/api/answer.rdf")
    def answer_rdf(q: str = "") -> Response:
        xml = agents.answer_as_rdf(state.graph, q, state.index())
        return Response(content=xml, media_type="application/rdf+xml")

    @app.get("/api/products")
    def products(class_iri: str = Query(alias="class")) -> dict:
        graph = state.graph
        cls = Iri(class_iri)
        found = sorted(schema.instances_of(graph, cls), key=lambda i: i.value)
        return {"class": cls.value, "products": [i.value for i in found]}

    @app.post("/api/profiles/{consumer_id}/fluents")
    def upsert_fluent(consumer_id: str, body: FluentBody) -> dict:
        try:
            category = snap.FluentCategory(body.category)
        except ValueError:
            raise ApiError(
                400,
                "unknown_category",
                f"{body.category!r} is not one of {', '.join(c.value for c in snap.FluentCategory)}",
            ) from None
        fluent = snap.Fluent(category=category, key=body.key, value=body.value)
        with state.lock:
            profile = state.profiles.get(consumer_id)
            if profile is None:
                profile = ConsumerProfile(consumer_id, snap.Situation.initial(consumer_id))
                state.profiles[consumer_id] = profile
            profile.history.append(profile.current)
            profile.current = snap.assert_fluent(profile.current, fluent)
        return _profile_payload(profile)

    @app.get("/api/profiles/{consumer_id}")
    def get_profile(consumer_id: str) -> dict:
        profile = state.profiles.get(consumer_id)
        if profile is None:
            raise agents.NotFoundError(f"no profile {consumer_id!r}")
        return _profile_payload(profile)

    @app.get("/api/recommendations/{consumer_id}")
    def recommendations(consumer_id: str, limit: int = 10) -> dict:
        profile = state.profiles.get(consumer_id)
        situation = profile.current if profile else snap.Situation.initial(consumer_id)
        recs = agents.recommend(state.graph, situation, state.rules, limit)
        return {
            "recommendations": [
                {
                    "product": r.product.value,
                    "need": {
                        "target": r.need.target.value,
                        "priority": r.need.priority,
                        "source_rule": r.need.source_rule,
                    },
                    "score": float(r.score),
                }
                for r in recs
            ]
        }

    @app.post("/api/events")
    def post_event(body: EventBody) -> dict:
        try:
            kind = snap.EventKind(body.kind)
        except ValueError:
            raise ApiError(
                400, "invalid_kind", f"{body.kind!r} is not 'action' or 'behavior'"
            ) from None
        event = state.log_event(kind, body.name, body.payload)
        return {
            "kind": event.kind.value,
            "name": event.name,
            "timestamp": event.timestamp,
            "payload": dict(event.payload),
        }

    @app.get("/api/export/triples")
    def export_triples() -> PlainTextResponse:
        return PlainTextResponse(serialize.emit_triples(state.graph))

    @app.post("/api/import/triples")
    async def import_triples(request: Request) -> dict:
        text = (await request.body()).decode("utf-8")
        incoming = serialize.parse_triples(text)
        merged = state.graph.copy()
        inserted = sum(1 for t in sorted(incoming.triples(), key=serialize.render_line) if merged.insert(t))
        state.swap_graph(merged)
        return {"inserted": inserted, "version": merged.version}

    @app.get("/api/health")
    def health() -> dict:
        graph = state.graph
        return {"version": graph.version, "triples": graph.size()}

    if state.config.ui_dir and state.config.ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=state.config.ui_dir, html=True), name="ui")

    return app


def _profile_payload(profile: ConsumerProfile) -> dict:
    return {
        "consumer_id": profile.consumer_id,
        "timestamp": profile.current.timestamp,
        "fluents": [
            {"category": f.category.value, "key": f.key, "value": f.value}
            for f in profile.current.fluents
        ],
        "history_length": len(profile.history),
    }


def serve(config: ServiceConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="info")
