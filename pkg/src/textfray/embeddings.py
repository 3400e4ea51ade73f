"""Static word vectors with word, contextual and sentence-level similarity.

The bundled provider loads GloVe-style text files and approximates a
contextual vector for a token as a mix of its own vector and the mean of its
window neighbours.  A remote provider with the same surface (backed by the
victim server's ``/embed`` endpoint) is available for true contextual
embeddings; both are interchangeable wherever the attack engine asks for
similarity scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import requests

from .errors import DataFormatError, QueryError
from .text import Document, _WORD_RE


@dataclass(frozen=True)
class ContextParams:
    """Window half-width (tokens each side) and context mix weight gamma."""

    window: int = 3
    gamma: float = 0.5

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


def cosine(u, v) -> float:
    """Cosine similarity; 0.0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


class EmbeddingStore:
    """Immutable token -> vector table of a fixed dimension."""

    def __init__(self, table: dict[str, np.ndarray], dim: int):
        self.table = table
        self.dim = dim

    def __contains__(self, token: str) -> bool:
        return token in self.table

    def __len__(self) -> int:
        return len(self.table)

    def word_vector(self, word: str) -> np.ndarray | None:
        """Vector of a lowercase word, or None when out of vocabulary."""
        return self.table.get(word)

    def sentence_vector(self, tokens: Sequence[str]) -> np.ndarray:
        return sentence_vector(self, tokens)

    def contextual_vector(
        self, doc: Document, index: int, candidate: str | None, params: ContextParams
    ) -> np.ndarray:
        return contextual_vector(self, doc, index, candidate, params)

    def sentence_similarity(self, a: Sequence[str], b: Sequence[str]) -> float:
        return sentence_similarity(self, a, b)


def load_embeddings(path) -> EmbeddingStore:
    """Parse a GloVe-style text file: ``token c1 c2 ... cN`` per line.

    An optional leading ``count dim`` header (exactly two integer fields) is
    detected and skipped.  Duplicate tokens keep their first occurrence.
    Raises :class:`DataFormatError` with the line number on inconsistent
    dimensions or non-numeric components.
    """
    table: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if lineno == 1 and len(fields) == 2:
                try:
                    int(fields[0]), int(fields[1])
                    continue  # header line
                except ValueError:
                    pass
            token, comps = fields[0], fields[1:]
            if not comps:
                raise DataFormatError(f"{path}:{lineno}: token without components")
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: non-numeric component") from exc
            if not np.all(np.isfinite(vec)):
                raise DataFormatError(f"{path}:{lineno}: non-finite component")
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {dim} components, found {vec.shape[0]}"
                )
            table.setdefault(token, vec)
    if dim is None:
        raise DataFormatError(f"{path}: no vectors found")
    return EmbeddingStore(table=table, dim=dim)


def _word_tokens(tokens: Sequence[str]) -> list[str]:
    return [t.lower() for t in tokens if _WORD_RE.match(t)]


def sentence_vector(store: EmbeddingStore, tokens: Sequence[str]) -> np.ndarray:
    """Mean vector of the in-vocabulary alphabetic tokens (zero if none)."""
    vecs = [store.table[t] for t in _word_tokens(tokens) if t in store.table]
    if not vecs:
        return np.zeros(store.dim, dtype=np.float64)
    return np.mean(vecs, axis=0)


def contextual_vector(
    store: EmbeddingStore,
    doc: Document,
    index: int,
    candidate: str | None,
    params: ContextParams,
) -> np.ndarray:
    """Mix of a token's own vector and the mean of its window neighbours.

    ``candidate`` (lowercase), when given, stands in for the token at
    ``index``.  Returns the zero vector when the focus word is out of
    vocabulary; the context term is zero when no neighbour is in vocabulary.
    """
    if index < 0 or index >= len(doc.tokens):
        raise ValueError(f"token index {index} out of range")
    word = candidate if candidate is not None else doc.tokens[index].normalized
    w = store.word_vector(word)
    if w is None:
        return np.zeros(store.dim, dtype=np.float64)
    lo = max(0, index - params.window)
    hi = min(len(doc.tokens), index + params.window + 1)
    ctx = [
        store.table[doc.tokens[i].normalized]
        for i in range(lo, hi)
        if i != index and doc.tokens[i].normalized in store.table
    ]
    c = np.mean(ctx, axis=0) if ctx else np.zeros(store.dim, dtype=np.float64)
    return (1.0 - params.gamma) * w + params.gamma * c


def sentence_similarity(store: EmbeddingStore, a: Sequence[str], b: Sequence[str]) -> float:
    """Cosine similarity of the two sentence vectors (0.0 when both are OOV)."""
    return cosine(sentence_vector(store, a), sentence_vector(store, b))


class RemoteEmbeddings:
    """Contextual embedding provider backed by a ``/embed`` HTTP endpoint.

    Mirrors the :class:`EmbeddingStore` similarity surface: sentence vectors
    come straight from the service, contextual vectors embed the window text
    around the focus token with the candidate substituted in.
    """

    def __init__(self, endpoint: str, timeout: float = 10.0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout

    def _embed(self, texts: list[str]) -> list[np.ndarray]:
        try:
            resp = requests.post(
                f"{self.endpoint}/embed", json={"texts": texts}, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except requests.RequestException as exc:
            raise QueryError(f"embedding request failed: {exc}") from exc
        vectors = payload.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise QueryError("embedding response missing aligned 'vectors'")
        return [np.asarray(v, dtype=np.float64) for v in vectors]

    def word_vector(self, word: str) -> np.ndarray:
        return self._embed([word])[0]

    def sentence_vector(self, tokens: Sequence[str]) -> np.ndarray:
        return self._embed([" ".join(tokens)])[0]

    def contextual_vector(
        self, doc: Document, index: int, candidate: str | None, params: ContextParams
    ) -> np.ndarray:
        if index < 0 or index >= len(doc.tokens):
            raise ValueError(f"token index {index} out of range")
        lo = max(0, index - params.window)
        hi = min(len(doc.tokens), index + params.window + 1)
        window = [doc.tokens[i].surface for i in range(lo, hi)]
        if candidate is not None:
            window[index - lo] = candidate
        return self._embed([" ".join(window)])[0]

    def sentence_similarity(self, a: Sequence[str], b: Sequence[str]) -> float:
        va, vb = self._embed([" ".join(a), " ".join(b)])
        return cosine(va, vb)
