"""Greedy word-substitution attacks against black-box text classifiers.

Two methods share one pipeline.  ``pwws`` scores every synonym candidate by
the probability drop it causes and orders positions by softmax-weighted
saliency times that drop.  ``mwsaa`` additionally filters candidates by how
well they fit the surrounding context (contextual embedding cosine), picks
the substitute whose single-word swap keeps sentence similarity highest
above a threshold, and feeds that similarity back into the replacement
order.  All victim access is probability queries under a hard budget.
"""

from __future__ import annotations

import hashlib
import math
import random
import time
from dataclasses import dataclass, field

from .embeddings import ContextParams, cosine
from .text import (
    Document,
    Substitution,
    apply_to_token_list,
    attackable_positions,
    splice,
    tokenize,
    transfer_case,
)
from .victim import UNK_TOKEN, QueryCounter, VictimInterface, counted
from .wordnet import LexicalDb, PosTag, lemmatize, synonyms

STATUS_SUCCESS = "success"
STATUS_FAILED = "failed_exhausted"
STATUS_BUDGET = "budget_exhausted"
STATUS_SKIPPED = "skipped_nothing_attackable"


class BudgetExceeded(Exception):
    """Internal signal: the next victim query would overrun the budget."""


@dataclass(frozen=True)
class AttackConfig:
    """Every tunable of the attack pipeline; echoed into reports."""

    method: str = "pwws"  # "pwws" | "mwsaa"
    selection: str = "deterministic"  # pwws only: "deterministic" | "randomized"
    top_k: int = 5
    sim_threshold: float = 0.80
    alpha: float = 1.0
    beta: float = 1.0
    feedback_lambda: float = 1.0
    context: ContextParams = ContextParams()
    seed: int = 42
    query_budget: int = 1000
    unk_token: str = UNK_TOKEN
    # mwsaa candidate choice: "similarity" takes the highest-similarity
    # substitute; "max_drop" takes the strongest attack subject to the
    # similarity threshold.
    mwsaa_selection: str = "similarity"

    def __post_init__(self):
        if self.method not in ("pwws", "mwsaa"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.selection not in ("deterministic", "randomized"):
            raise ValueError(f"unknown selection {self.selection!r}")
        if self.mwsaa_selection not in ("similarity", "max_drop"):
            raise ValueError(f"unknown mwsaa_selection {self.mwsaa_selection!r}")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise ValueError("sim_threshold must lie in [0, 1]")
        if self.alpha < 0 or self.beta < 0 or self.feedback_lambda < 0:
            raise ValueError("alpha, beta and feedback_lambda must be >= 0")
        if self.query_budget < 1:
            raise ValueError("query_budget must be >= 1")


@dataclass
class Candidate:
    """One substitution option with its scores, filled in as the pipeline runs."""

    lemma: str
    lex_sim: float = 0.0
    contextual_fit: float | None = None
    sentence_sim: float | None = None
    prob_drop: float | None = None


@dataclass
class CandidateSet:
    position: int
    original_surface: str
    candidates: list[Candidate] = field(default_factory=list)


@dataclass(frozen=True)
class SaliencyVector:
    """Raw saliency scores and their softmax weights, per attackable position."""

    positions: tuple[int, ...]
    scores: dict[int, float]
    weights: dict[int, float]


@dataclass
class AppliedStep:
    """Trace entry for one applied substitution."""

    substitution: Substitution
    prob_drop: float | None
    sentence_sim: float | None
    queries_after: int


@dataclass
class AttackResult:
    status: str
    original_label: str
    final_label: str
    adversarial_text: str
    substitutions: list[Substitution]
    queries: int
    elapsed: float
    final_similarity: float
    steps: list[AppliedStep] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status == STATUS_SUCCESS


class _BudgetedVictim:
    """Counted victim that refuses to issue an over-budget query."""

    def __init__(self, inner: QueryCounter, budget: int):
        self.inner = inner
        self.budget = budget

    @property
    def count(self) -> int:
        return self.inner.count

    def labels(self):
        return self.inner.labels()

    def predict_proba(self, text: str):
        if self.inner.count + 1 > self.budget:
            raise BudgetExceeded
        return self.inner.predict_proba(text)


def derive_rng(seed: int, sample_index: int) -> random.Random:
    """Per-sample RNG derived stably from (seed, sample index)."""
    digest = hashlib.sha256(f"textfray:{seed}:{sample_index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def softmax(values) -> list[float]:
    """Numerically stable softmax of a non-empty list."""
    if len(values) == 0:
        raise ValueError("softmax of empty list")
    peak = max(values)
    exps = [math.exp(v - peak) for v in values]
    total = sum(exps)
    return [e / total for e in exps]


def saliency(
    victim: VictimInterface,
    doc: Document,
    unk_token: str = UNK_TOKEN,
    positions: list[int] | None = None,
    base: tuple[str, float] | None = None,
) -> SaliencyVector:
    """Per-position saliency: drop in P(y*) when the token becomes ``unk_token``.

    Weights are the softmax of the raw scores.  Uses one query for the
    original text (skipped when ``base`` carries the cached prediction) plus
    one per position.
    """
    if positions is None:
        positions = [i for i, tok in enumerate(doc.tokens) if tok.attackable]
    if not positions:
        raise ValueError("document has no attackable tokens")
    if base is None:
        dist = victim.predict_proba(doc.source)
        y_star, p_orig = dist.top_label, dist.prob_of(dist.top_label)
    else:
        y_star, p_orig = base
    scores: dict[int, float] = {}
    for pos in positions:
        tok = doc.tokens[pos]
        probe = splice(doc, [Substitution(pos, tok.surface, unk_token, unk_token)])
        scores[pos] = p_orig - victim.predict_proba(probe).prob_of(y_star)
    weights = softmax([scores[p] for p in positions])
    return SaliencyVector(
        positions=tuple(positions),
        scores=scores,
        weights={p: w for p, w in zip(positions, weights)},
    )


def generate_candidates(
    db: LexicalDb, store, doc: Document, position: int, cfg: AttackConfig
) -> CandidateSet:
    """Synonym candidates for the token at ``position``, lexicographically ordered.

    Lemmas come from every part of speech the (lemmatized) token is indexed
    under; the original form is excluded.  For mwsaa, candidates without an
    embedding are dropped.  ``lex_sim`` is the embedding cosine to the
    original word (0 when either side is out of vocabulary).
    """
    tok = doc.tokens[position]
    norm = tok.normalized
    lemmas: set[str] = set()
    for pos in PosTag:
        for lemma in lemmatize(db, norm, pos):
            lemmas |= synonyms(db, lemma)
    lemmas.discard(norm)

    orig_vec = store.word_vector(norm)
    candidates = []
    for lemma in sorted(lemmas):
        vec = store.word_vector(lemma)
        if cfg.method == "mwsaa" and vec is None:
            continue
        lex_sim = cosine(orig_vec, vec) if orig_vec is not None and vec is not None else 0.0
        candidates.append(Candidate(lemma=lemma, lex_sim=lex_sim))
    return CandidateSet(position=position, original_surface=tok.surface, candidates=candidates)


def prob_drop(
    victim: VictimInterface,
    doc: Document,
    position: int,
    lemma: str,
    y_star: str,
    base_prob: float | None = None,
) -> float:
    """P(y*|x) minus P(y*|x with this one substitution), scored on the original.

    Case is transferred onto the replacement before splicing.  Costs one
    query when ``base_prob`` is cached, two otherwise.
    """
    tok = doc.tokens[position]
    if base_prob is None:
        base_prob = victim.predict_proba(doc.source).prob_of(y_star)
    surface = transfer_case(tok.surface, lemma)
    text = splice(doc, [Substitution(position, tok.surface, surface, lemma)])
    return base_prob - victim.predict_proba(text).prob_of(y_star)


def contextual_filter(
    store, doc: Document, position: int, cand_set: CandidateSet, cfg: AttackConfig
) -> CandidateSet:
    """Keep the top_k candidates by contextual fit (ties lexicographic).

    Fit is the cosine between the contextual vector of the original token
    and the contextual vector with the candidate substituted in.
    """
    base_vec = store.contextual_vector(doc, position, None, cfg.context)
    for cand in cand_set.candidates:
        cand_vec = store.contextual_vector(doc, position, cand.lemma, cfg.context)
        cand.contextual_fit = cosine(base_vec, cand_vec)
    kept = sorted(cand_set.candidates, key=lambda c: (-c.contextual_fit, c.lemma))[: cfg.top_k]
    return CandidateSet(
        position=cand_set.position, original_surface=cand_set.original_surface, candidates=kept
    )


def semantic_select(
    store, doc: Document, position: int, cand_set: CandidateSet, cfg: AttackConfig
) -> Candidate | None:
    """Choose the substitute whose one-word swap stays most similar to the original.

    Candidates below ``sim_threshold`` are dropped.  The default picks the
    similarity argmax (ties: larger prob_drop, then lexicographic); the
    ``max_drop`` variant picks the strongest attack among those above the
    threshold.
    """
    originals = [t.surface for t in doc.tokens]
    for cand in cand_set.candidates:
        swapped = apply_to_token_list(doc.tokens, position, cand.lemma)
        cand.sentence_sim = store.sentence_similarity(originals, swapped)
    survivors = [c for c in cand_set.candidates if c.sentence_sim >= cfg.sim_threshold]
    if not survivors:
        return None

    def drop_of(c: Candidate) -> float:
        return c.prob_drop if c.prob_drop is not None else 0.0

    if cfg.mwsaa_selection == "max_drop":
        return min(survivors, key=lambda c: (-drop_of(c), -c.sentence_sim, c.lemma))
    return min(survivors, key=lambda c: (-c.sentence_sim, -drop_of(c), c.lemma))


def select_substitute_pwws(
    victim: VictimInterface,
    doc: Document,
    position: int,
    cand_set: CandidateSet,
    cfg: AttackConfig,
    rng: random.Random,
    y_star: str | None = None,
    base_prob: float | None = None,
) -> Candidate | None:
    """PWWS per-position choice after scoring the probability drop of every candidate.

    Deterministic mode takes the argmax drop (ties lexicographic); randomized
    mode samples one candidate with weight softmax(alpha*drop + beta*lex_sim).
    """
    if not cand_set.candidates:
        return None
    if y_star is None or base_prob is None:
        dist = victim.predict_proba(doc.source)
        y_star = dist.top_label
        base_prob = dist.prob_of(y_star)
    for cand in cand_set.candidates:
        cand.prob_drop = prob_drop(victim, doc, position, cand.lemma, y_star, base_prob)
    if cfg.selection == "deterministic":
        return min(cand_set.candidates, key=lambda c: (-c.prob_drop, c.lemma))
    weights = softmax([cfg.alpha * c.prob_drop + cfg.beta * c.lex_sim for c in cand_set.candidates])
    draw = rng.random()
    acc = 0.0
    for cand, w in zip(cand_set.candidates, weights):
        acc += w
        if draw < acc:
            return cand
    return cand_set.candidates[-1]


def replacement_order(
    sal: SaliencyVector, chosen: dict[int, Candidate], cfg: AttackConfig
) -> list[int]:
    """Positions sorted by descending order score, ties by ascending index.

    pwws scores phi * drop; mwsaa multiplies in the chosen candidate's
    sentence similarity (clamped at 0) raised to ``feedback_lambda``.
    """
    if not chosen:
        raise ValueError("no chosen candidates to order")

    def score(pos: int) -> float:
        cand = chosen[pos]
        h = sal.weights[pos] * cand.prob_drop
        if cfg.method == "mwsaa":
            sim = max(cand.sentence_sim if cand.sentence_sim is not None else 0.0, 0.0)
            h *= sim**cfg.feedback_lambda
        return h

    return sorted(chosen, key=lambda p: (-score(p), p))


def attack(
    victim: VictimInterface,
    db: LexicalDb,
    store,
    doc_text: str,
    cfg: AttackConfig,
    stopwords: frozenset[str] | set[str] = frozenset(),
    sample_index: int = 0,
) -> AttackResult:
    """Run the full greedy substitution attack on one text.

    Substitutions are scored one at a time against the original document,
    then applied cumulatively in replacement order, re-querying after each
    splice until the label flips, positions run out, or the next query would
    exceed the budget (that query is never issued).  Raises
    :class:`~textfray.errors.QueryError` when the victim itself fails.
    """
    start = time.perf_counter()
    doc = tokenize(doc_text)
    budgeted = _BudgetedVictim(counted(victim), cfg.query_budget)
    originals = [t.surface for t in doc.tokens]

    def finish(status, y_star, final_label, applied, steps):
        adv_text = splice(doc, applied)
        adv_tokens = [t.surface for t in tokenize(adv_text).tokens]
        return AttackResult(
            status=status,
            original_label=y_star,
            final_label=final_label,
            adversarial_text=adv_text,
            substitutions=list(applied),
            queries=budgeted.count,
            elapsed=time.perf_counter() - start,
            final_similarity=store.sentence_similarity(originals, adv_tokens),
            steps=steps,
        )

    base = budgeted.predict_proba(doc.source)  # budget >= 1, never over budget here
    y_star = base.top_label
    p_orig = base.prob_of(y_star)

    positions = attackable_positions(doc, stopwords)
    if not positions:
        return finish(STATUS_SKIPPED, y_star, y_star, [], [])

    applied: list[Substitution] = []
    steps: list[AppliedStep] = []
    try:
        sal = saliency(budgeted, doc, cfg.unk_token, positions, base=(y_star, p_orig))

        rng = derive_rng(cfg.seed, sample_index)
        chosen: dict[int, Candidate] = {}
        for pos in positions:
            cand_set = generate_candidates(db, store, doc, pos, cfg)
            if not cand_set.candidates:
                continue
            if cfg.method == "pwws":
                cand = select_substitute_pwws(
                    budgeted, doc, pos, cand_set, cfg, rng, y_star=y_star, base_prob=p_orig
                )
                if cand is not None and cand.sentence_sim is None:
                    swapped = apply_to_token_list(doc.tokens, pos, cand.lemma)
                    cand.sentence_sim = store.sentence_similarity(originals, swapped)
            else:
                filtered = contextual_filter(store, doc, pos, cand_set, cfg)
                for c in filtered.candidates:
                    c.prob_drop = prob_drop(budgeted, doc, pos, c.lemma, y_star, p_orig)
                cand = semantic_select(store, doc, pos, filtered, cfg)
            if cand is not None:
                chosen[pos] = cand

        if not chosen:
            return finish(STATUS_FAILED, y_star, y_star, applied, steps)

        for pos in replacement_order(sal, chosen, cfg):
            cand = chosen[pos]
            tok = doc.tokens[pos]
            sub = Substitution(
                position=pos,
                original_surface=tok.surface,
                replacement_surface=transfer_case(tok.surface, cand.lemma),
                replacement_lemma=cand.lemma,
            )
            dist = budgeted.predict_proba(splice(doc, applied + [sub]))
            applied.append(sub)
            steps.append(
                AppliedStep(
                    substitution=sub,
                    prob_drop=cand.prob_drop,
                    sentence_sim=cand.sentence_sim,
                    queries_after=budgeted.count,
                )
            )
            label = dist.top_label
            if label != y_star:
                return finish(STATUS_SUCCESS, y_star, label, applied, steps)
        return finish(STATUS_FAILED, y_star, y_star, applied, steps)
    except BudgetExceeded:
        return finish(STATUS_BUDGET, y_star, y_star, applied, steps)
