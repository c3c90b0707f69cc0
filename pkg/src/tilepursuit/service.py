"""HTTP/JSON facade over exploration sessions.

A thin layer: every endpoint delegates to the corresponding session
operation and serialises the result, so anything reachable over the API
is reachable (with identical numbers) through the library.  Sessions live
in an in-memory store keyed by id; mutations are serialised per session
with a lock, reads run concurrently.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import german
from .errors import EmptyTileError, SelectionTooSmallError, TilePursuitError
from .ingestion import from_values, load_csv, make_toy
from .selection import PointSelection, attribute_ratios, crosstab
from .session import Session
from .tiling import HypothesisTilings


class SessionStore:
    def __init__(self, data_dir=None):
        self._sessions = {}
        self._locks = {}
        self._store_lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None

    def add(self, session, data_ref=None):
        with self._store_lock:
            self._sessions[session.id] = (session, data_ref)
            self._locks[session.id] = threading.Lock()
        self.persist(session.id)
        return session

    def get(self, session_id):
        try:
            return self._sessions[session_id][0]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}") from None

    def lock(self, session_id):
        return self._locks[session_id]

    def persist(self, session_id):
        if self.data_dir is None:
            return
        session, data_ref = self._sessions[session_id]
        self.data_dir.mkdir(parents=True, exist_ok=True)
        with open(self.data_dir / f"session-{session_id}.json", "w") as fh:
            json.dump(session.to_json(data_ref=data_ref), fh)


class InlineData(BaseModel):
    values: list[list[float]]
    col_names: list[str] | None = None
    side_cols: dict[str, list[str]] | None = None
    scale: bool = True


class CreateSessionBody(BaseModel):
    csv_ref: str | None = None
    inline: InlineData | None = None
    manifest: str | dict | None = None
    builtin: str | None = None  # "german" or "toy"
    seed: int = 0  # session seed (sample overlays)
    data_seed: int = 0  # builtin dataset generator seed
    subsample_n: int | None = None


class HypothesisBody(BaseModel):
    rows: list[int] | str = "all"
    cols: list[int] | str = "all"
    partition: list[list[int]] | str = "singletons"


class TileBody(BaseModel):
    rows: list[int]
    tau: float = 0.5


def _session_summary(session):
    view_gain = None
    if session.hypothesis is not None:
        try:
            view_gain = session.compute_view(num_samples=0).gain
        except TilePursuitError:
            view_gain = None
    hypo = session.hypothesis.to_json() if session.hypothesis is not None else None
    if hypo is not None:
        hypo["k"] = len(hypo["partition"])
    return {
        "id": session.id,
        "n": session.data.n_rows,
        "m": session.data.n_cols,
        "col_names": session.data.col_names,
        "side_cols": list(session.data.side_cols),
        "seed": session.seed,
        "tile_count": len(session.user_map.tile_extents()),
        "event_count": len(session.history),
        "hypothesis": hypo,
        "gain": view_gain,
    }


def _parse_rows(spec, n):
    if spec == "all":
        return list(range(n))
    return [int(r) for r in spec]


def _coords_payload(array):
    arr = np.asarray(array)
    return {"shape": list(arr.shape), "values": [float(v) for v in arr.ravel()]}


def create_app(data_dir=None, ui_dir=None):
    app = FastAPI(title="tilepursuit service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(data_dir=data_dir)
    app.state.store = store

    @app.exception_handler(TilePursuitError)
    async def _domain_error(request, exc):
        from fastapi.responses import JSONResponse

        payload = {"detail": str(exc)}
        if isinstance(exc, EmptyTileError) and exc.report is not None:
            payload["report"] = exc.report.to_json()
        return JSONResponse(status_code=422, content=payload)

    @app.post("/sessions", status_code=201)
    def create_session_endpoint(body: CreateSessionBody):
        try:
            if body.builtin == "german":
                data = german.load_german(seed=body.data_seed, subsample_n=body.subsample_n)
                data_ref = {"kind": "builtin", "name": "german", "seed": body.data_seed}
            elif body.builtin == "toy":
                data = make_toy(seed=body.data_seed)
                data_ref = {"kind": "builtin", "name": "toy", "seed": body.data_seed}
            elif body.csv_ref:
                data = load_csv(body.csv_ref, manifest=body.manifest, subsample_n=body.subsample_n, seed=body.seed)
                data_ref = {"kind": "csv", "path": body.csv_ref, "manifest": body.manifest}
            elif body.inline is not None:
                side = {k: np.asarray(v) for k, v in (body.inline.side_cols or {}).items()}
                data = from_values(
                    np.asarray(body.inline.values, dtype=float),
                    col_names=body.inline.col_names,
                    side_cols=side,
                    scale=body.inline.scale,
                )
                data_ref = {"kind": "inline"}
            else:
                raise HTTPException(status_code=400, detail="need csv_ref, inline data, or builtin")
        except HTTPException:
            raise
        except Exception as exc:
            raise HTTPException(status_code=400, detail=f"ingestion failed: {exc}") from exc
        session = Session(data, seed=body.seed)
        store.add(session, data_ref=data_ref)
        return _session_summary(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_summary(store.get(session_id))

    @app.put("/sessions/{session_id}/hypothesis")
    def put_hypothesis(session_id: str, body: HypothesisBody):
        session = store.get(session_id)
        n, m = session.data.shape
        rows = _parse_rows(body.rows, n)
        cols = _parse_rows(body.cols, m)
        if body.partition == "singletons":
            partition = None
        elif body.partition == "whole":
            partition = [cols]
        else:
            partition = body.partition
        h = HypothesisTilings(rows, cols, partition)
        with store.lock(session_id):
            session.set_hypothesis(h)
            store.persist(session_id)
        return _session_summary(session)

    @app.get("/sessions/{session_id}/view")
    def get_view(session_id: str, samples: int = Query(default=1, ge=0)):
        session = store.get(session_id)
        if session.hypothesis is None:
            raise HTTPException(status_code=409, detail="no hypothesis set")
        view = session.compute_view(num_samples=samples)
        proj = view.projection
        return {
            "gain": view.gain,
            "degenerate": proj.degenerate,
            "truncated": proj.truncated,
            "directions": proj.directions.T.tolist(),
            "gains": proj.gains.tolist(),
            "floor": proj.floor,
            "axis_labels": view.axis_labels(session.data.col_names),
            "coords_data": _coords_payload(view.coords_data),
            "samples_h1": [_coords_payload(s) for s in view.samples_h1],
            "samples_h2": [_coords_payload(s) for s in view.samples_h2],
            "focus_rows": view.focus_rows.tolist(),
        }

    @app.post("/sessions/{session_id}/tiles", status_code=201)
    def post_tile(session_id: str, body: TileBody):
        session = store.get(session_id)
        try:
            sel = PointSelection(body.rows, source="api")
        except SelectionTooSmallError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        report = attribute_ratios(session.data, sel, tau=body.tau)
        with store.lock(session_id):
            session.add_tile_from_selection(sel, tau=body.tau)
            store.persist(session_id)
        tile_event = session.history[-1]
        return {
            "report": report.to_json(),
            "tile": {"rows": tile_event["rows"], "cols": tile_event["cols"]},
            "tile_count": len(session.user_map.tile_extents()),
        }

    @app.get("/sessions/{session_id}/pcp")
    def get_pcp(session_id: str, rows: str = Query(...), tau: float = Query(default=0.5)):
        session = store.get(session_id)
        sel = _parse_selection(rows, session)
        report = attribute_ratios(session.data, sel, tau=tau)
        return {
            "columns": session.data.col_names,
            "values": _coords_payload(session.data.values),
            "selection": list(sel.row_indices),
            "report": report.to_json(),
        }

    @app.get("/sessions/{session_id}/factor")
    def get_factor(session_id: str, col: str = Query(...)):
        session = store.get(session_id)
        if col not in session.data.side_cols:
            raise HTTPException(status_code=422, detail=f"no categorical side column named {col!r}")
        values = [str(v) for v in session.data.side_cols[col]]
        return {"column": col, "values": values, "categories": sorted(set(values))}

    @app.get("/sessions/{session_id}/crosstab")
    def get_crosstab(session_id: str, col: str = Query(...), rows: str = Query(...)):
        session = store.get(session_id)
        sel = _parse_selection(rows, session)
        try:
            counts = crosstab(session.data, col, sel)
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"column": col, "counts": counts, "total": len(sel.row_indices)}

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str):
        session = store.get(session_id)
        return session.to_json()

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index():
            return FileResponse(Path(ui_dir) / "index.html")

    return app


def _parse_selection(rows, session):
    try:
        indices = [int(r) for r in rows.split(",") if r.strip() != ""]
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=f"bad rows parameter: {exc}") from exc
    if not indices:
        raise HTTPException(status_code=422, detail="rows parameter is empty")
    try:
        sel = PointSelection(indices, source="api")
        sel.check_shape(session.data.n_rows)
    except TilePursuitError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return sel


def run_server(port=8000, host="127.0.0.1", data_dir=None, ui_dir=None):
    import uvicorn

    app = create_app(data_dir=data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
