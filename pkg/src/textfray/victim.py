"""Black-box victim classifiers: a trainable naive Bayes and a remote client.

Victims expose exactly two things: a fixed label order and
``predict_proba(text)``.  The attack engine never sees gradients or logits.
:class:`QueryCounter` wraps any victim and counts every ``predict_proba``
call (including failed remote calls), which is what the per-sample query
metrics are read from.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import requests

from .errors import DataFormatError, QueryError, TrainingError
from .text import tokenize

UNK_TOKEN = "<unk>"

_NB_FORMAT = "textfray-nb"
_NB_VERSION = 1


@dataclass(frozen=True)
class ProbDist:
    """A probability distribution over a victim's fixed label order."""

    labels: tuple[str, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("ProbDist needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        if len(self.labels) != len(self.probs):
            raise ValueError("labels and probs must align")
        if abs(sum(self.probs) - 1.0) > 1e-6:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")

    @property
    def top_label(self) -> str:
        """Argmax label; ties resolve to the earlier label in the fixed order."""
        best = max(range(len(self.probs)), key=lambda i: (self.probs[i], -i))
        return self.labels[best]

    def prob_of(self, label: str) -> float:
        return self.probs[self.labels.index(label)]


@runtime_checkable
class VictimInterface(Protocol):
    def labels(self) -> tuple[str, ...]: ...

    def predict_proba(self, text: str) -> ProbDist: ...


def _count_tokens(text: str) -> list[str]:
    return [tok.normalized for tok in tokenize(text).tokens if tok.attackable]


class NaiveBayesVictim:
    """Multinomial naive Bayes over lowercased word-token counts.

    The vocabulary is the training tokens plus a reserved ``<unk>`` entry
    carrying a raw count of zero, so out-of-vocabulary probe tokens get a
    well-defined smoothed likelihood.
    """

    def __init__(
        self,
        labels: tuple[str, ...],
        doc_counts: dict[str, int],
        token_counts: dict[str, dict[str, int]],
        smoothing: float,
    ):
        self._labels = labels
        self.doc_counts = doc_counts
        self.token_counts = token_counts
        self.smoothing = smoothing
        self.vocab = sorted({t for counts in token_counts.values() for t in counts} | {UNK_TOKEN})
        self._vocab_set = set(self.vocab)
        self._total_docs = sum(doc_counts.values())
        self._totals = {y: sum(token_counts[y].values()) for y in labels}

    def labels(self) -> tuple[str, ...]:
        return self._labels

    def predict_proba(self, text: str) -> ProbDist:
        tokens = _count_tokens(text)
        log_joint = []
        vocab_size = len(self.vocab)
        for y in self._labels:
            lp = math.log(self.doc_counts[y] / self._total_docs)
            denom = self._totals[y] + self.smoothing * vocab_size
            counts = self.token_counts[y]
            for t in tokens:
                if t not in self._vocab_set:
                    t = UNK_TOKEN
                lp += math.log((counts.get(t, 0) + self.smoothing) / denom)
            log_joint.append(lp)
        peak = max(log_joint)
        weights = [math.exp(lp - peak) for lp in log_joint]
        total = sum(weights)
        return ProbDist(labels=self._labels, probs=tuple(w / total for w in weights))

    def save(self, path) -> None:
        """Serialize to the documented flat JSON format, byte-deterministic."""
        payload = {
            "format": _NB_FORMAT,
            "version": _NB_VERSION,
            "smoothing": self.smoothing,
            "labels": list(self._labels),
            "doc_counts": self.doc_counts,
            "token_counts": self.token_counts,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "NaiveBayesVictim":
        try:
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"cannot read victim file {path}: {exc}") from exc
        if payload.get("format") != _NB_FORMAT or payload.get("version") != _NB_VERSION:
            raise DataFormatError(f"{path} is not a {_NB_FORMAT} v{_NB_VERSION} file")
        return cls(
            labels=tuple(payload["labels"]),
            doc_counts=payload["doc_counts"],
            token_counts=payload["token_counts"],
            smoothing=payload["smoothing"],
        )


def train_naive_bayes(corpus, smoothing: float = 1.0) -> NaiveBayesVictim:
    """Train the naive Bayes victim on ``[(text, label), ...]``.

    Requires at least two distinct labels and a positive smoothing constant;
    every document must tokenize to at least one word token.
    """
    if smoothing <= 0:
        raise TrainingError("smoothing must be positive")
    labels = tuple(sorted({label for _, label in corpus}))
    if len(labels) < 2:
        raise TrainingError(f"need >= 2 distinct labels, found {len(labels)}")
    doc_counts = {y: 0 for y in labels}
    token_counts: dict[str, dict[str, int]] = {y: {} for y in labels}
    for i, (text, label) in enumerate(corpus):
        tokens = _count_tokens(text)
        if not tokens:
            raise TrainingError(f"document {i} is empty after tokenization")
        doc_counts[label] += 1
        counts = token_counts[label]
        for t in tokens:
            counts[t] = counts.get(t, 0) + 1
    return NaiveBayesVictim(labels, doc_counts, token_counts, smoothing)


class RemoteVictim:
    """HTTP victim speaking the wire protocol: GET /meta, POST /predict.

    Labels are fetched once at construction.  Transport failures raise
    :class:`QueryError` (after ``retries`` additional attempts, default 0 so
    query accounting stays exact).
    """

    def __init__(self, endpoint: str, timeout: float = 10.0, retries: int = 0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        try:
            resp = requests.get(f"{self.endpoint}/meta", timeout=timeout)
            resp.raise_for_status()
            meta = resp.json()
        except requests.RequestException as exc:
            raise QueryError(f"cannot reach victim /meta at {self.endpoint}: {exc}") from exc
        labels = meta.get("labels")
        if not isinstance(labels, list) or not labels:
            raise QueryError(f"/meta at {self.endpoint} returned no labels")
        self.name = meta.get("name", self.endpoint)
        self._labels = tuple(str(x) for x in labels)

    def labels(self) -> tuple[str, ...]:
        return self._labels

    def predict_proba(self, text: str) -> ProbDist:
        rows = self.predict_batch([text])
        return rows[0]

    def predict_batch(self, texts: list[str]) -> list[ProbDist]:
        last_exc: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(
                    f"{self.endpoint}/predict", json={"texts": texts}, timeout=self.timeout
                )
                resp.raise_for_status()
                payload = resp.json()
                break
            except requests.Timeout as exc:
                last_exc = QueryError(f"victim query timeout after {self.timeout}s: {exc}")
            except requests.RequestException as exc:
                last_exc = QueryError(f"victim query failed: {exc}")
        else:
            raise last_exc  # type: ignore[misc]
        rows = payload.get("probs")
        if not isinstance(rows, list) or len(rows) != len(texts):
            raise QueryError("victim /predict returned misaligned 'probs'")
        out = []
        for row in rows:
            if len(row) != len(self._labels):
                raise QueryError("victim /predict row does not match /meta label order")
            out.append(ProbDist(labels=self._labels, probs=tuple(float(p) for p in row)))
        return out


class QueryCounter:
    """Transparent victim wrapper counting every predict_proba call."""

    def __init__(self, victim: VictimInterface):
        self.victim = victim
        self._count = 0
        self._lock = threading.Lock()

    @property
    def count(self) -> int:
        return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0

    def labels(self) -> tuple[str, ...]:
        return self.victim.labels()

    def predict_proba(self, text: str) -> ProbDist:
        with self._lock:
            self._count += 1
        return self.victim.predict_proba(text)


def counted(victim: VictimInterface) -> QueryCounter:
    """Wrap a victim for exact query accounting."""
    return QueryCounter(victim)
