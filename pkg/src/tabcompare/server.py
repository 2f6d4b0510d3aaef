"""HTTP service: score uploads, comparison runs, document retrieval, static UI.

Objects are content-addressed: an upload's id is the SHA-256 of its bytes, a
comparison's id is the SHA-256 of its serialized document. Re-uploading the
same file or re-running the same comparison therefore returns the same id.
The store is in-memory with optional one-file-per-object directory
persistence. GET endpoints never mutate state.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .coloring import ColorMap, ColorStop, parse_hex
from .document import ConfigError, RunOptions, VersionSelect, build_document, write_document
from .model import CanonicalError, Score, read_canonical, write_canonical
from .tabtext import ParseError, parse_tabtext, score_tracks

__all__ = ["MAX_UPLOAD_BYTES", "ApiError", "Store", "create_app"]

MAX_UPLOAD_BYTES = 5 * 1024 * 1024


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


@dataclass(frozen=True)
class StoredScore:
    id: str
    filename: str
    created_at: str
    source: str
    score: Score


@dataclass(frozen=True)
class StoredComparison:
    id: str
    created_at: str
    version_names: tuple[str, ...]
    document_text: str


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _parse_source(source: str) -> Score:
    if source.lstrip()[:1] == "{":
        return read_canonical(source)
    return parse_tabtext(source)


class Store:
    """Content-addressed object store, optionally mirrored to a directory.

    Reads take the lock only to fetch references; stored objects are
    immutable, so handing them out without copying is safe.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._scores: dict[str, StoredScore] = {}
        self._comparisons: dict[str, StoredComparison] = {}
        self._dir = Path(data_dir) if data_dir else None
        if self._dir:
            (self._dir / "scores").mkdir(parents=True, exist_ok=True)
            (self._dir / "comparisons").mkdir(parents=True, exist_ok=True)
            self._load()

    def _load(self) -> None:
        assert self._dir is not None
        for path in sorted((self._dir / "scores").glob("*.json")):
            obj = json.loads(path.read_text("utf-8"))
            source = obj["source"]
            self._scores[path.stem] = StoredScore(
                id=path.stem,
                filename=obj["filename"],
                created_at=obj["createdAt"],
                source=source,
                score=_parse_source(source),
            )
        for path in sorted((self._dir / "comparisons").glob("*.json")):
            obj = json.loads(path.read_text("utf-8"))
            self._comparisons[path.stem] = StoredComparison(
                id=path.stem,
                created_at=obj["createdAt"],
                version_names=tuple(obj["versionNames"]),
                document_text=obj["document"],
            )

    def _persist(self, kind: str, object_id: str, payload: dict) -> None:
        if not self._dir:
            return
        path = self._dir / kind / f"{object_id}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False), "utf-8")
        tmp.replace(path)

    def put_score(self, raw: bytes, filename: str) -> StoredScore:
        object_id = _digest(raw)
        with self._lock:
            existing = self._scores.get(object_id)
        if existing is not None:
            return existing
        try:
            source = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ApiError(400, f"upload is not valid UTF-8: {exc.reason}") from exc
        try:
            score = _parse_source(source)
        except (ParseError, CanonicalError) as exc:
            raise ApiError(400, str(exc)) from exc
        stored = StoredScore(
            id=object_id, filename=filename, created_at=_now(), source=source, score=score
        )
        with self._lock:
            self._scores.setdefault(object_id, stored)
            self._persist("scores", object_id, {
                "filename": stored.filename,
                "createdAt": stored.created_at,
                "source": stored.source,
            })
        return stored

    def get_score(self, object_id: str) -> StoredScore:
        with self._lock:
            stored = self._scores.get(object_id)
        if stored is None:
            raise ApiError(404, f"unknown score id {object_id!r}")
        return stored

    def put_comparison(self, document_text: str, version_names: tuple[str, ...]) -> StoredComparison:
        object_id = _digest(document_text.encode("utf-8"))
        with self._lock:
            existing = self._comparisons.get(object_id)
            if existing is not None:
                return existing
            stored = StoredComparison(
                id=object_id,
                created_at=_now(),
                version_names=version_names,
                document_text=document_text,
            )
            self._comparisons[object_id] = stored
            self._persist("comparisons", object_id, {
                "createdAt": stored.created_at,
                "versionNames": list(stored.version_names),
                "document": stored.document_text,
            })
        return stored

    def get_comparison(self, object_id: str) -> StoredComparison:
        with self._lock:
            stored = self._comparisons.get(object_id)
        if stored is None:
            raise ApiError(404, f"unknown comparison id {object_id!r}")
        return stored

    def list_comparisons(self) -> list[StoredComparison]:
        with self._lock:
            items = list(self._comparisons.values())
        return sorted(items, key=lambda c: (c.created_at, c.id))


def _colormap_from_body(stops_obj: object) -> ColorMap:
    if not isinstance(stops_obj, list):
        raise ApiError(400, "colormap must be a list of {t, rgbHex} stops")
    stops = []
    for stop in stops_obj:
        if not isinstance(stop, dict) or "t" not in stop:
            raise ApiError(400, "colormap stops need 't' and 'rgbHex'")
        hex_value = stop.get("rgbHex", stop.get("rgb"))
        if hex_value is None:
            raise ApiError(400, "colormap stops need 't' and 'rgbHex'")
        try:
            stops.append(ColorStop(float(stop["t"]), parse_hex(str(hex_value))))
        except (TypeError, ValueError) as exc:
            raise ApiError(400, f"bad colormap stop: {exc}") from exc
    try:
        return ColorMap(tuple(stops))
    except ValueError as exc:
        raise ApiError(400, f"bad colormap: {exc}") from exc


def _float_option(body: dict, key: str, default: float) -> float:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ApiError(400, f"{key} must be a number")
    return float(value)


def create_app(data_dir: str | Path | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="tabcompare", docs_url=None, redoc_url=None)
    store = Store(data_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse({"error": exc.message}, status_code=exc.status)

    @app.exception_handler(Exception)
    async def _internal_error(_request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse({"error": f"internal error: {exc}"}, status_code=500)

    @app.post("/api/scores")
    async def upload_score(request: Request) -> JSONResponse:
        raw = await request.body()
        if len(raw) > MAX_UPLOAD_BYTES:
            raise ApiError(413, f"upload exceeds {MAX_UPLOAD_BYTES} bytes")
        filename = request.headers.get("X-Filename", "untitled.tabtxt")
        stored = store.put_score(raw, filename)
        tracks = [
            {"index": i, "name": name, "strings": strings, "bars": bars}
            for i, name, strings, bars in score_tracks(stored.score)
        ]
        return JSONResponse({"id": stored.id, "tracks": tracks})

    @app.get("/api/scores/{score_id}")
    async def get_score(score_id: str) -> Response:
        stored = store.get_score(score_id)
        return Response(write_canonical(stored.score), media_type="application/json")

    @app.post("/api/comparisons")
    async def create_comparison(request: Request) -> JSONResponse:
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"request body is not valid JSON: {exc.msg}") from exc
        if not isinstance(body, dict) or not isinstance(body.get("versions"), list):
            raise ApiError(400, "body must be an object with a 'versions' list")

        scores: list[Score] = []
        selects: list[VersionSelect] = []
        for i, entry in enumerate(body["versions"]):
            if not isinstance(entry, dict) or "scoreId" not in entry:
                raise ApiError(400, f"versions[{i}] needs a scoreId")
            stored = store.get_score(str(entry["scoreId"]))
            track = entry.get("track", 0)
            if isinstance(track, bool) or not isinstance(track, int):
                raise ApiError(400, f"versions[{i}].track must be an integer")
            name = entry.get("name") or Path(stored.filename).stem
            scores.append(stored.score)
            selects.append(VersionSelect(track=track, name=str(name)))

        reference = body.get("reference")
        if reference is not None and (isinstance(reference, bool) or not isinstance(reference, int)):
            raise ApiError(400, "reference must be an integer or null")
        options = RunOptions(
            versions=tuple(selects),
            gap_cost=_float_option(body, "gapCost", 0.75),
            w_chroma=_float_option(body, "wChroma", 1.0),
            w_onset=_float_option(body, "wOnset", 1.0),
            scale_length_mm=_float_option(body, "scaleLengthMm", 648.0),
            reference=reference,
        )
        if "colormap" in body:
            options = replace(options, colormap=_colormap_from_body(body["colormap"]))
        try:
            document = build_document(scores, options)
        except ConfigError as exc:
            raise ApiError(400, str(exc)) from exc
        text = write_document(document)
        stored = store.put_comparison(text, tuple(s.name or "" for s in selects))
        return JSONResponse({"id": stored.id})

    @app.get("/api/comparisons/{comparison_id}")
    async def get_comparison(comparison_id: str) -> Response:
        stored = store.get_comparison(comparison_id)
        return Response(stored.document_text, media_type="application/json")

    @app.get("/api/comparisons")
    async def list_comparisons() -> JSONResponse:
        return JSONResponse([
            {"id": c.id, "createdAt": c.created_at, "versionNames": list(c.version_names)}
            for c in store.list_comparisons()
        ])

    ui_path = Path(ui_dir) if ui_dir else Path("frontend") / "dist"
    if ui_path.is_dir():
        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def index() -> str:
            return (
                "<!doctype html><title>tabcompare</title>"
                "<h1>tabcompare service</h1>"
                "<p>The web UI bundle was not found. Build it with "
                "<code>npm run build</code> in <code>frontend/</code> and restart, "
                "or point <code>--ui-dir</code> at the bundle.</p>"
            )

    return app
