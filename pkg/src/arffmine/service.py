"""Local HTTP surface for the browser UI: dataset upload, algorithm catalog,
run lifecycle with polling and cancellation.

Endpoints (all JSON, UTF-8):
  GET    /api/algorithms
  POST   /api/datasets            body: raw ARFF bytes (?filename=...)
  GET    /api/datasets
  GET    /api/datasets/{id}
  POST   /api/runs                body: {"dataset_id": ..., "spec": {...}}
  GET    /api/runs/{id}
  DELETE /api/runs/{id}
Static UI bundle is served at / when frontend/dist exists.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .data import ArffError, load_arff, parse_arff, summarize
from .engine import (
    AlgorithmSpec,
    Engine,
    UnknownJobError,
    ValidationError,
    list_algorithms,
)

DEFAULT_MAX_UPLOAD = 32 * 1024 * 1024


class SpecBody(BaseModel):
    algorithm: str
    params: dict = Field(default_factory=dict)
    seed: int = 1
    folds: int = 10
    class_index: int | str = "last"


class RunRequest(BaseModel):
    dataset_id: str
    spec: SpecBody


class DatasetStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._data = {}
        self._counter = 0

    def add(self, filename, ds):
        with self._lock:
            self._counter += 1
            token = f"ds-{self._counter}"
            self._data[token] = {
                "id": token,
                "filename": filename,
                "dataset": ds,
                "summary": summarize(ds).to_dict(),
                "uploaded_at": time.time(),
            }
            return self._data[token]

    def get(self, token):
        with self._lock:
            return self._data.get(token)

    def entries(self):
        with self._lock:
            return [
                {"id": e["id"], "filename": e["filename"], "summary": e["summary"]}
                for e in self._data.values()
            ]


def _default_ui_dir():
    return Path(__file__).resolve().parents[2] / "frontend" / "dist"


def create_app(data_dir=None, max_upload_bytes=DEFAULT_MAX_UPLOAD, ui_dir=None):
    app = FastAPI(title="arffmine service")
    store = DatasetStore()
    engine = Engine()
    app.state.store = store
    app.state.engine = engine

    if data_dir:
        for path in sorted(Path(data_dir).glob("*.arff")):
            store.add(path.name, load_arff(path))

    @app.get("/api/algorithms")
    def algorithms():
        return list_algorithms()

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(request: Request, filename: str = "upload.arff"):
        body = await request.body()
        if len(body) > max_upload_bytes:
            raise HTTPException(413, f"upload exceeds {max_upload_bytes} bytes")
        if not body:
            raise HTTPException(422, "empty upload")
        try:
            ds = parse_arff(body.decode("utf-8", errors="strict"))
        except UnicodeDecodeError:
            raise HTTPException(422, "upload is not valid UTF-8") from None
        except ArffError as exc:
            raise HTTPException(422, str(exc)) from None
        entry = store.add(filename, ds)
        return {"id": entry["id"], "filename": entry["filename"],
                "summary": entry["summary"]}

    @app.get("/api/datasets")
    def datasets():
        return store.entries()

    @app.get("/api/datasets/{dataset_id}")
    def dataset(dataset_id: str):
        entry = store.get(dataset_id)
        if entry is None:
            raise HTTPException(404, f"unknown dataset {dataset_id!r}")
        return {"id": entry["id"], "filename": entry["filename"],
                "summary": entry["summary"]}

    @app.post("/api/runs", status_code=202)
    def start_run(req: RunRequest):
        entry = store.get(req.dataset_id)
        if entry is None:
            raise HTTPException(404, f"unknown dataset {req.dataset_id!r}")
        spec = AlgorithmSpec(
            algorithm=req.spec.algorithm,
            params=req.spec.params,
            seed=req.spec.seed,
            folds=req.spec.folds,
            class_index=req.spec.class_index,
        )
        try:
            run_id = engine.start_run(spec, entry["dataset"])
        except ValidationError as exc:
            raise HTTPException(400, str(exc)) from None
        return {"run_id": run_id}

    @app.get("/api/runs/{run_id}")
    def poll_run(run_id: str):
        try:
            return engine.poll_run(run_id)
        except UnknownJobError:
            raise HTTPException(404, f"unknown run {run_id!r}") from None

    @app.delete("/api/runs/{run_id}")
    def cancel_run(run_id: str):
        try:
            return engine.cancel_run(run_id)
        except UnknownJobError:
            raise HTTPException(404, f"unknown run {run_id!r}") from None

    bundle = Path(ui_dir) if ui_dir else _default_ui_dir()
    if bundle.is_dir():
        app.mount("/", StaticFiles(directory=str(bundle), html=True), name="ui")
    else:
        @app.get("/")
        def index():
            return JSONResponse({
                "service": "arffmine",
                "ui": "not built (see frontend/README.md)",
                "api": "/api/algorithms",
            })

    return app
