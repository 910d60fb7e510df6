"""HTTP/JSON service: datasets, lattice queries, and interactive probe sessions.

Single-process FastAPI app. Datasets are immutable and shared; probe
sessions are mutated under a per-session lock with optimistic concurrency
(revision counter + If-Match). Layouts are always recomputed from probe
state, never persisted.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .context import ContextError, parse_csv, parse_cxt, transpose, write_cxt
from .lattice import (
    DEFAULT_CONCEPT_LIMIT,
    LatticeOverflowError,
    aoc_to_json,
    build_aoc,
    build_lattice,
    compute_groups,
    enumerate_concepts,
    export_dot,
    iceberg_filter,
    lattice_to_json,
)
from .probe import (
    ProbeState,
    complementary_cover,
    cover_result_to_json,
    delta_to_json,
    diff_layout,
    group_to_json,
    layout,
    layout_to_json,
    probe_to_json,
    reveal,
    reveal_to_json,
)

log = logging.getLogger("conceptprobe.server")


class ApiError(Exception):
    def __init__(self, status, message):
        self.status = status
        self.message = message


class DatasetRecord:
    """An immutable context with cached groups and lazily built lattice/AOC."""

    def __init__(self, dataset_id, ctx):
        self.id = dataset_id
        self.ctx = ctx
        self.groups = compute_groups(ctx)
        self._lattice = None
        self._aoc = None
        self._lock = threading.Lock()

    def lattice(self, limit):
        with self._lock:
            if self._lattice is None:
                self._lattice = build_lattice(self.ctx, enumerate_concepts(self.ctx, limit))
            return self._lattice

    def aoc(self, limit):
        with self._lock:
            if self._aoc is None:
                if self._lattice is None:
                    self._lattice = build_lattice(
                        self.ctx, enumerate_concepts(self.ctx, limit)
                    )
                self._aoc = build_aoc(self.ctx, self._lattice)
            return self._aoc

    def summary(self):
        return {
            "id": self.id,
            "name": self.ctx.name,
            "objects": self.ctx.n_objects,
            "attributes": self.ctx.n_attributes,
            "groupCount": len(self.groups),
        }


class ProbeSession:
    """One probe with a monotonically increasing revision counter."""

    def __init__(self, session_id, dataset_id, probe):
        self.id = session_id
        self.dataset_id = dataset_id
        self.probe = probe
        self.revision = 1
        self.lock = threading.Lock()


class ServerState:
    def __init__(self, data_dir=None, *, max_objects=10_000, max_attributes=10_000,
                 concept_limit=DEFAULT_CONCEPT_LIMIT):
        self.data_dir = Path(data_dir) if data_dir else None
        self.max_objects = max_objects
        self.max_attributes = max_attributes
        self.concept_limit = concept_limit
        self.datasets: dict[str, DatasetRecord] = {}
        self.sessions: dict[str, ProbeSession] = {}
        self._session_seq = 0
        self._lock = threading.Lock()
        if self.data_dir:
            self._load()

    # -- persistence --------------------------------------------------------

    def _dataset_path(self, dataset_id):
        return self.data_dir / "datasets" / f"{dataset_id}.cxt"

    def _session_path(self, session_id):
        return self.data_dir / "sessions" / f"{session_id}.json"

    def _load(self):
        ds_dir = self.data_dir / "datasets"
        if ds_dir.is_dir():
            for path in sorted(ds_dir.glob("*.cxt")):
                try:
                    ctx = parse_cxt(path.read_text(encoding="utf-8"))
                    self.datasets[path.stem] = DatasetRecord(path.stem, ctx)
                except (ContextError, OSError) as exc:
                    log.warning("skipping corrupt dataset file %s: %s", path, exc)
        ses_dir = self.data_dir / "sessions"
        if ses_dir.is_dir():
            for path in sorted(ses_dir.glob("*.json")):
                try:
                    raw = json.loads(path.read_text(encoding="utf-8"))
                    record = self.datasets[raw["datasetId"]]
                    probe = ProbeState.restore(
                        record.ctx,
                        {name: int(h) for name, h in raw["weights"].items()},
                    )
                    session = ProbeSession(raw["id"], raw["datasetId"], probe)
                    session.revision = int(raw["revision"])
                    self.sessions[raw["id"]] = session
                    seq = int(raw["id"].lstrip("p") or 0)
                    self._session_seq = max(self._session_seq, seq)
                except (KeyError, ValueError, TypeError) as exc:
                    log.warning("skipping corrupt session file %s: %s", path, exc)

    def save_dataset(self, record):
        if not self.data_dir:
            return
        path = self._dataset_path(record.id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(write_cxt(record.ctx), encoding="utf-8")

    def save_session(self, session):
        if not self.data_dir:
            return
        ctx = session.probe.ctx
        payload = {
            "id": session.id,
            "datasetId": session.dataset_id,
            "weights": {ctx.objects[g]: w for g, w in session.probe.items()},
            "revision": session.revision,
        }
        path = self._session_path(session.id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    # -- registry -------------------------------------------------------------

    def add_dataset(self, ctx):
        if ctx.n_objects > self.max_objects or ctx.n_attributes > self.max_attributes:
            raise ApiError(
                413,
                f"context of {ctx.n_objects}x{ctx.n_attributes} exceeds the cap of "
                f"{self.max_objects}x{self.max_attributes}",
            )
        dataset_id = hashlib.sha256(write_cxt(ctx).encode("utf-8")).hexdigest()[:12]
        with self._lock:
            record = self.datasets.get(dataset_id)
            if record is None:
                record = DatasetRecord(dataset_id, ctx)
                self.datasets[dataset_id] = record
                self.save_dataset(record)
        return record

    def dataset(self, dataset_id):
        record = self.datasets.get(dataset_id)
        if record is None:
            raise ApiError(404, f"unknown dataset {dataset_id!r}")
        return record

    def create_session(self, record):
        with self._lock:
            self._session_seq += 1
            session_id = f"p{self._session_seq:04d}"
            session = ProbeSession(session_id, record.id, ProbeState(record.ctx))
            self.sessions[session_id] = session
        self.save_session(session)
        return session

    def session(self, session_id):
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, f"unknown probe session {session_id!r}")
        return session


def _require(payload, key, kind, what):
    if not isinstance(payload, dict) or key not in payload:
        raise ApiError(400, f"payload must carry {key!r}")
    value = payload[key]
    if not isinstance(value, kind):
        raise ApiError(400, f"{key!r} must be {what}")
    return value


def create_app(data_dir=None, *, max_objects=10_000, max_attributes=10_000,
               concept_limit=DEFAULT_CONCEPT_LIMIT, token=None):
    """Build the service; `data_dir=None` keeps everything in memory."""
    state = ServerState(
        data_dir,
        max_objects=max_objects,
        max_attributes=max_attributes,
        concept_limit=concept_limit,
    )
    app = FastAPI(title="conceptprobe", docs_url=None, redoc_url=None)
    app.state.store = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request, exc):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.middleware("http")
    async def _auth(request, call_next):
        if token and request.method != "OPTIONS":
            header = request.headers.get("authorization", "")
            if header != f"Bearer {token}":
                return JSONResponse(status_code=401, content={"error": "unauthorized"})
        return await call_next(request)

    async def _json_body(request):
        try:
            return json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"malformed JSON payload: {exc}") from None

    def _check_revision(request, session):
        if_match = request.headers.get("if-match")
        if if_match is None:
            return
        try:
            expected = int(if_match)
        except ValueError:
            raise ApiError(400, f"If-Match must be a revision number, got {if_match!r}") from None
        if expected != session.revision:
            raise ApiError(
                409,
                f"revision conflict: expected {session.revision}, got {expected}",
            )

    def _mutate(request, session_id, action):
        """Apply a probe mutation under the session lock; respond with layout+delta."""
        session = state.session(session_id)
        with session.lock:
            _check_revision(request, session)
            record = state.dataset(session.dataset_id)
            before = layout(record.ctx, session.probe, record.groups)
            try:
                action(session, record)
            except ValueError as exc:
                raise ApiError(404, str(exc)) from None
            session.revision += 1
            after = layout(record.ctx, session.probe, record.groups)
            state.save_session(session)
            return {
                "revision": session.revision,
                "layout": layout_to_json(record.ctx, record.groups, after),
                "delta": delta_to_json(diff_layout(before, after)),
            }

    # -- datasets -------------------------------------------------------------

    @app.post("/datasets", status_code=201)
    async def create_dataset(request: Request):
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            raise ApiError(400, "dataset body must be UTF-8 text") from None
        try:
            if "csv" in content_type:
                ctx = parse_csv(text)
            else:
                ctx = parse_cxt(text)
        except ContextError as exc:
            raise ApiError(400, f"unparseable context: {exc}") from None
        record = state.add_dataset(ctx)
        return record.summary()

    @app.get("/datasets")
    async def list_datasets():
        return [state.datasets[k].summary() for k in sorted(state.datasets)]

    @app.get("/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str):
        record = state.dataset(dataset_id)
        return {
            **record.summary(),
            "objectNames": list(record.ctx.objects),
            "attributeNames": list(record.ctx.attributes),
        }

    @app.get("/datasets/{dataset_id}/groups")
    async def get_groups(dataset_id: str):
        record = state.dataset(dataset_id)
        return {"groups": [group_to_json(record.ctx, g) for g in record.groups]}

    def _lattice_of(record):
        try:
            return record.lattice(state.concept_limit)
        except LatticeOverflowError as exc:
            raise ApiError(422, str(exc)) from None

    @app.get("/datasets/{dataset_id}/lattice")
    async def get_lattice(dataset_id: str, minSupport: str | None = None):
        record = state.dataset(dataset_id)
        lat = _lattice_of(record)
        iceberg = None
        if minSupport is not None:
            try:
                threshold = Fraction(minSupport)
            except (ValueError, ZeroDivisionError):
                raise ApiError(400, f"invalid minSupport {minSupport!r}") from None
            if not 0 <= threshold <= 1:
                raise ApiError(400, "minSupport must lie in [0, 1]")
            iceberg = iceberg_filter(lat, record.ctx, threshold)
        return lattice_to_json(lat, iceberg)

    @app.get("/datasets/{dataset_id}/lattice.dot")
    async def get_lattice_dot(dataset_id: str):
        record = state.dataset(dataset_id)
        return PlainTextResponse(export_dot(_lattice_of(record), labeling="full"))

    @app.get("/datasets/{dataset_id}/aoc")
    async def get_aoc(dataset_id: str):
        record = state.dataset(dataset_id)
        try:
            return aoc_to_json(record.aoc(state.concept_limit))
        except LatticeOverflowError as exc:
            raise ApiError(422, str(exc)) from None

    @app.post("/datasets/{dataset_id}/transpose", status_code=201)
    async def transpose_dataset(dataset_id: str):
        record = state.dataset(dataset_id)
        return state.add_dataset(transpose(record.ctx)).summary()

    # -- probe sessions ---------------------------------------------------------

    @app.post("/datasets/{dataset_id}/probes", status_code=201)
    async def create_probe(dataset_id: str):
        record = state.dataset(dataset_id)
        session = state.create_session(record)
        lay = layout(record.ctx, session.probe, record.groups)
        return {
            "sessionId": session.id,
            "revision": session.revision,
            "layout": layout_to_json(record.ctx, record.groups, lay),
        }

    @app.get("/probes/{session_id}")
    async def get_probe(session_id: str):
        session = state.session(session_id)
        return {
            "sessionId": session.id,
            "datasetId": session.dataset_id,
            "revision": session.revision,
            "probe": probe_to_json(session.probe),
        }

    @app.get("/probes/{session_id}/layout")
    async def get_layout(session_id: str):
        session = state.session(session_id)
        record = state.dataset(session.dataset_id)
        lay = layout(record.ctx, session.probe, record.groups)
        return {
            "revision": session.revision,
            **layout_to_json(record.ctx, record.groups, lay),
        }

    @app.post("/probes/{session_id}/objects")
    async def add_probe_object(session_id: str, request: Request):
        payload = await _json_body(request)
        name = _require(payload, "object", str, "an object name")
        return _mutate(request, session_id, lambda s, r: s.probe.add_object(name))

    @app.delete("/probes/{session_id}/objects/{name}")
    async def remove_probe_object(session_id: str, name: str, request: Request):
        def action(session, record):
            if name not in record.ctx.object_index:
                raise ValueError(f"unknown object {name!r}")
            session.probe.remove_object(name)

        return _mutate(request, session_id, action)

    @app.post("/probes/{session_id}/clear")
    async def clear_probe(session_id: str, request: Request):
        return _mutate(request, session_id, lambda s, r: s.probe.clear())

    @app.put("/probes/{session_id}/weights")
    async def set_probe_weight(session_id: str, request: Request):
        payload = await _json_body(request)
        name = _require(payload, "object", str, "an object name")
        if "weight" not in payload:
            raise ApiError(400, "payload must carry 'weight'")
        weight = payload["weight"]
        if isinstance(weight, bool) or not isinstance(weight, (int, float, str)):
            raise ApiError(400, "'weight' must be a number or decimal string")

        def action(session, record):
            idx = record.ctx.object_index.get(name)
            if idx is None:
                raise ValueError(f"unknown object {name!r}")
            if idx not in session.probe._weights:
                raise ValueError(f"object {name!r} is not loaded")
            try:
                session.probe.set_weight(name, weight)
            except ValueError as exc:
                raise ApiError(400, str(exc)) from None

        return _mutate(request, session_id, action)

    @app.post("/probes/{session_id}/add-group")
    async def add_probe_group(session_id: str, request: Request):
        payload = await _json_body(request)
        group_id = _require(payload, "groupId", int, "a group id")

        def action(session, record):
            if not 0 <= group_id < len(record.groups):
                raise ValueError(f"unknown group id {group_id}")
            session.probe.add_group_extent(record.groups[group_id])

        return _mutate(request, session_id, action)

    @app.get("/probes/{session_id}/reveal")
    async def reveal_group(session_id: str, group: int):
        session = state.session(session_id)
        record = state.dataset(session.dataset_id)
        try:
            result = reveal(record.ctx, session.probe, group, record.groups)
        except ValueError as exc:
            raise ApiError(404, str(exc)) from None
        return reveal_to_json(record.ctx, result)

    @app.get("/probes/{session_id}/covers")
    async def probe_covers(session_id: str, maxSize: int = 4, maxResults: int = 50):
        session = state.session(session_id)
        record = state.dataset(session.dataset_id)
        if maxSize < 1 or maxResults < 1:
            raise ApiError(400, "maxSize and maxResults must be positive")
        try:
            result = complementary_cover(
                record.ctx, session.probe, maxSize, maxResults, record.groups
            )
        except ValueError as exc:
            raise ApiError(400, str(exc)) from None
        return cover_result_to_json(result)

    return app
