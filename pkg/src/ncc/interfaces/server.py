"""HTTP inference service behind the web demo.

Endpoints (JSON, UTF-8):
  GET  /api/models       catalog of loaded models
  POST /api/complete     {model_id, tokens|text, k}   -> {candidates: [{token, prob}]}
  POST /api/summarize    {model_id, code}             -> {summary}
  POST /api/search       {model_id, query, k}         -> {results: [{path, score}]}

Errors are JSON ``{"error": ...}``: 404 unknown model, 400 malformed body,
422 empty payload.  Models are loaded once at startup and never mutated.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import EmptyInput
from .modelstore import Predictor

TASK_OF_ENDPOINT = {"complete": "complete", "summarize": "summarize", "search": "search"}


class ModelCatalog:
    def __init__(self, entries: list[dict], base_dir: Path):
        self.entries = entries
        self.predictors: dict[str, Predictor] = {}
        seen = set()
        for entry in entries:
            model_id = entry["id"]
            if model_id in seen:
                raise ValueError(f"duplicate model id {model_id!r} in catalog")
            seen.add(model_id)
            model_dir = Path(entry["dir"])
            if not model_dir.is_absolute():
                model_dir = base_dir / model_dir
            self.predictors[model_id] = Predictor(model_dir)

    @classmethod
    def from_file(cls, path: str | Path) -> "ModelCatalog":
        path = Path(path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        return cls(doc["models"], path.parent)

    def describe(self) -> list[dict]:
        return [
            {"id": e["id"], "task": e["task"], "description": e.get("description", "")}
            for e in self.entries
        ]


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def create_app(catalog: ModelCatalog, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ncc inference service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/models")
    def list_models():
        return {"models": catalog.describe()}

    async def handle(request: Request, endpoint: str):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        model_id = body.get("model_id")
        if not isinstance(model_id, str) or not model_id:
            return _error(400, "missing 'model_id'")
        predictor = catalog.predictors.get(model_id)
        if predictor is None:
            return _error(404, f"unknown model {model_id!r}",
                          known_models=sorted(catalog.predictors))
        k = body.get("k", 5)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            return _error(400, "'k' must be a positive integer")

        if endpoint == "complete":
            payload = body.get("tokens")
            if payload is None and isinstance(body.get("text"), str):
                payload = body["text"]
            elif payload is not None:
                if not isinstance(payload, list) or not all(isinstance(t, str) for t in payload):
                    return _error(400, "'tokens' must be a list of strings")
        elif endpoint == "summarize":
            payload = body.get("code")
            if payload is not None and not isinstance(payload, str):
                return _error(400, "'code' must be a string")
        else:
            payload = body.get("query")
            if payload is not None and not isinstance(payload, str):
                return _error(400, "'query' must be a string")
        if payload is None or (isinstance(payload, (str, list)) and len(payload) == 0) \
                or (isinstance(payload, str) and not payload.strip()):
            return _error(422, "empty payload")

        try:
            return JSONResponse(predictor.predict(endpoint, payload, k))
        except EmptyInput as exc:
            return _error(422, str(exc))

    @app.post("/api/complete")
    async def complete(request: Request):
        return await handle(request, "complete")

    @app.post("/api/summarize")
    async def summarize(request: Request):
        return await handle(request, "summarize")

    @app.post("/api/search")
    async def search(request: Request):
        return await handle(request, "search")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
