"""FastAPI application serving a sequence-classification checkpoint.

Wire protocol (JSON over HTTP, UTF-8):

- ``GET /meta`` -> ``{"name": ..., "labels": [...]}``
- ``POST /predict`` ``{"texts": [...]}`` -> ``{"probs": [[...], ...]}``,
  rows aligned with the /meta label order, each summing to 1.
- ``POST /embed`` ``{"texts": [...]}`` -> ``{"vectors": [[...], ...]}``,
  one mean-pooled last-layer sentence vector per text.

Requests are stateless; batching happens only inside a request, in chunks of
``max_batch``, so client-side query accounting stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from transformers import AutoModelForSequenceClassification, AutoTokenizer


@dataclass(frozen=True)
class ServerConfig:
    model: str
    port: int = 8000
    max_batch: int = 32
    device: str = "cpu"

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError("port must lie in [1, 65535]")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message})


def _parse_texts(payload) -> list[str] | None:
    if not isinstance(payload, dict):
        return None
    texts = payload.get("texts")
    if not isinstance(texts, list) or not texts:
        return None
    if not all(isinstance(t, str) for t in texts):
        return None
    return texts


def create_app(cfg: ServerConfig) -> FastAPI:
    """Load the checkpoint and build the service."""
    device = torch.device(cfg.device)
    tokenizer = AutoTokenizer.from_pretrained(cfg.model)
    model = AutoModelForSequenceClassification.from_pretrained(cfg.model)
    model.to(device)
    model.eval()
    labels = [model.config.id2label[i] for i in range(model.config.num_labels)]

    app = FastAPI(title="victim-server")
    app.state.config = cfg
    app.state.labels = labels
    app.state.predicted_texts = 0

    # tokenizers without an explicit cap carry a sentinel model_max_length
    max_length = min(int(tokenizer.model_max_length), 512)

    def encode(texts: list[str]):
        return tokenizer(
            texts, padding=True, truncation=True, max_length=max_length,
            return_tensors="pt",
        ).to(device)

    @app.get("/meta")
    def meta():
        return {"name": cfg.model, "labels": labels}

    @app.post("/predict")
    async def predict(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _bad_request("body must be JSON")
        texts = _parse_texts(payload)
        if texts is None:
            return _bad_request("'texts' must be a non-empty list of strings")
        app.state.predicted_texts += len(texts)
        rows: list[list[float]] = []
        with torch.no_grad():
            for i in range(0, len(texts), cfg.max_batch):
                batch = encode(texts[i : i + cfg.max_batch])
                logits = model(**batch).logits
                probs = torch.softmax(logits, dim=-1)
                rows.extend(probs.cpu().tolist())
        return {"probs": rows}

    @app.post("/embed")
    async def embed(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _bad_request("body must be JSON")
        texts = _parse_texts(payload)
        if texts is None:
            return _bad_request("'texts' must be a non-empty list of strings")
        vectors: list[list[float]] = []
        with torch.no_grad():
            for i in range(0, len(texts), cfg.max_batch):
                batch = encode(texts[i : i + cfg.max_batch])
                hidden = model(**batch, output_hidden_states=True).hidden_states[-1]
                mask = batch["attention_mask"].unsqueeze(-1).to(hidden.dtype)
                pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1e-9)
                vectors.extend(pooled.cpu().tolist())
        return {"vectors": vectors}

    return app
