import dataclasses
import math

import numpy as np
import pytest

from textfray.attack import (
    AttackConfig,
    Candidate,
    CandidateSet,
    SaliencyVector,
    attack,
    contextual_filter,
    derive_rng,
    generate_candidates,
    prob_drop,
    replacement_order,
    saliency,
    select_substitute_pwws,
    semantic_select,
    softmax,
)
from textfray.embeddings import ContextParams, EmbeddingStore
from textfray.errors import QueryError
from textfray.text import splice, tokenize
from textfray.victim import ProbDist, QueryCounter, train_naive_bayes


class WordWeightVictim:
    """Scripted victim: P(pos) = base minus the weights of present words.

    Substituting a word of weight a by one of weight b changes P(pos) by
    exactly a - b, which makes per-candidate probability drops controllable.
    """

    def __init__(self, weights, base=0.9):
        self.weights = weights
        self.base = base

    def labels(self):
        return ("neg", "pos")

    def predict_proba(self, text):
        p = self.base
        for tok in tokenize(text).tokens:
            p -= self.weights.get(tok.normalized, 0.0)
        p = min(max(p, 1e-9), 1.0 - 1e-9)
        return ProbDist(("neg", "pos"), (1.0 - p, p))


def make_store(table):
    arrays = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}
    dim = len(next(iter(arrays.values())))
    return EmbeddingStore(table=arrays, dim=dim)


# --- softmax -----------------------------------------------------------------


def test_softmax_uniform():
    for w in softmax([0.0, 0.0, 0.0]):
        assert w == pytest.approx(1 / 3, abs=1e-12)


def test_softmax_singleton():
    assert softmax([17.3]) == [1.0]


def test_softmax_closed_form():
    e = math.e
    got = softmax([1.0, 0.0])
    assert got[0] == pytest.approx(e / (e + 1), abs=1e-9)
    assert got[1] == pytest.approx(1 / (e + 1), abs=1e-9)


def test_softmax_empty_rejected():
    with pytest.raises(ValueError):
        softmax([])


def test_softmax_large_values_stable():
    got = softmax([1000.0, 999.0])
    assert sum(got) == pytest.approx(1.0)
    assert got[0] > got[1]


def test_softmax_scaling_preserves_order():
    raw = [0.3, -0.1, 0.7, 0.2]
    order = sorted(range(4), key=lambda i: -softmax(raw)[i])
    for k in (0.5, 2.0, 10.0):
        scaled = sorted(range(4), key=lambda i: -softmax([k * v for v in raw])[i])
        assert scaled == order


# --- saliency ----------------------------------------------------------------


def test_saliency_singleton_softmax():
    victim = WordWeightVictim({"good": 0.2})
    doc = tokenize("the good one")
    sal = saliency(victim, doc, positions=[1])
    assert sal.weights[1] == pytest.approx(1.0)


def test_saliency_symmetric_words_equal_phi():
    victim = train_naive_bayes([("aa bb", "pos"), ("cc dd", "neg")], smoothing=1.0)
    doc = tokenize("aa bb")
    sal = saliency(victim, doc)
    assert sal.scores[0] == pytest.approx(sal.scores[1], abs=1e-12)
    assert sal.weights[0] == pytest.approx(sal.weights[1], abs=1e-9)
    assert sum(sal.weights.values()) == pytest.approx(1.0, abs=1e-9)


def test_saliency_no_attackable_rejected():
    victim = WordWeightVictim({})
    with pytest.raises(ValueError):
        saliency(victim, tokenize("!!!"))


def test_saliency_query_count():
    victim = QueryCounter(WordWeightVictim({"good": 0.2, "bad": 0.1}))
    doc = tokenize("good bad thing")
    saliency(victim, doc)
    assert victim.count == 1 + 3  # original + one probe per attackable token


def test_saliency_uses_cached_base():
    victim = QueryCounter(WordWeightVictim({"good": 0.2}))
    doc = tokenize("good thing")
    saliency(victim, doc, base=("pos", 0.7))
    assert victim.count == 2


def test_saliency_probe_uses_unk_token():
    seen = []

    class Recording(WordWeightVictim):
        def predict_proba(self, text):
            seen.append(text)
            return super().predict_proba(text)

    victim = Recording({"good": 0.2})
    saliency(victim, tokenize("good thing"), unk_token="<unk>")
    assert "<unk> thing" in seen


# --- candidate generation ------------------------------------------------------


def test_candidates_unknown_word_empty(db, store, pwws_cfg):
    doc = tokenize("qqqq zzz")
    assert generate_candidates(db, store, doc, 0, pwws_cfg).candidates == []


def test_candidates_labour_contains_toil(db, store, pwws_cfg):
    doc = tokenize("hard labour here")
    cands = generate_candidates(db, store, doc, 1, pwws_cfg)
    assert "toil" in [c.lemma for c in cands.candidates]


def test_candidates_exclude_original(db, store, pwws_cfg):
    doc = tokenize("a good film")
    cands = generate_candidates(db, store, doc, 1, pwws_cfg)
    assert "good" not in [c.lemma for c in cands.candidates]


def test_candidates_lexicographic_order(db, store, pwws_cfg):
    doc = tokenize("a good film")
    lemmas = [c.lemma for c in generate_candidates(db, store, doc, 1, pwws_cfg).candidates]
    assert lemmas == sorted(lemmas)


def test_candidates_exception_path(db, store, pwws_cfg):
    # "better" reaches the synonyms of "good" through the exception list
    doc = tokenize("a better film")
    lemmas = {c.lemma for c in generate_candidates(db, store, doc, 1, pwws_cfg).candidates}
    assert "fine" in lemmas


def test_candidates_inflected_form(db, store, pwws_cfg):
    doc = tokenize("the stories")
    lemmas = {c.lemma for c in generate_candidates(db, store, doc, 1, pwws_cfg).candidates}
    assert "tale" in lemmas


def test_mwsaa_drops_embedding_oov(db, mwsaa_cfg, pwws_cfg):
    tiny = make_store({"good": [1.0, 0.0], "fine": [0.9, 0.1]})
    doc = tokenize("a good film")
    kept = {c.lemma for c in generate_candidates(db, tiny, doc, 1, mwsaa_cfg).candidates}
    assert kept == {"fine"}
    # pwws keeps embedding-OOV candidates, with zero lex_sim
    all_c = generate_candidates(db, tiny, doc, 1, pwws_cfg).candidates
    assert len(all_c) > 1
    oov = [c for c in all_c if c.lemma != "fine"]
    assert all(c.lex_sim == 0.0 for c in oov)


def test_mwsaa_all_oov_empty(db, mwsaa_cfg):
    tiny = make_store({"good": [1.0, 0.0]})
    doc = tokenize("a good film")
    assert generate_candidates(db, tiny, doc, 1, mwsaa_cfg).candidates == []


def test_lex_sim_filled(db, store, pwws_cfg):
    doc = tokenize("a good film")
    cands = generate_candidates(db, store, doc, 1, pwws_cfg).candidates
    fine = next(c for c in cands if c.lemma == "fine")
    assert fine.lex_sim > 0.5  # same synset base direction


# --- prob_drop -----------------------------------------------------------------


def test_prob_drop_same_statistics_zero():
    victim = train_naive_bayes([("aa bb", "pos"), ("cc dd", "neg")], smoothing=1.0)
    doc = tokenize("aa cc")
    # aa and bb have identical per-class counts, so the swap changes nothing
    assert prob_drop(victim, doc, 0, "bb", "pos") == pytest.approx(0.0, abs=1e-12)


def test_prob_drop_positive_for_evidence_removal():
    victim = train_naive_bayes(
        [("good show", "pos"), ("neutral show", "pos"), ("bad show", "neg"), ("neutral thing", "neg")],
        smoothing=1.0,
    )
    doc = tokenize("good show")
    y = victim.predict_proba("good show").top_label
    assert prob_drop(victim, doc, 0, "neutral", y) > 0.0


def test_prob_drop_bounded(nb_victim, toy_corpus):
    doc = tokenize(toy_corpus.samples[0][0])
    y = nb_victim.predict_proba(doc.source).top_label
    for lemma in ("fine", "terrible", "zzz"):
        assert -1.0 <= prob_drop(nb_victim, doc, 3, lemma, y) <= 1.0


def test_prob_drop_cached_base_single_query():
    victim = QueryCounter(WordWeightVictim({"good": 0.2, "fine": 0.1}))
    doc = tokenize("good thing")
    drop = prob_drop(victim, doc, 0, "fine", "pos", base_prob=0.7)
    assert victim.count == 1
    assert drop == pytest.approx(0.7 - 0.8)  # fine is weaker evidence


def test_prob_drop_applies_case_transfer():
    seen = []

    class Recording(WordWeightVictim):
        def predict_proba(self, text):
            seen.append(text)
            return super().predict_proba(text)

    victim = Recording({"good": 0.2})
    doc = tokenize("Good thing")
    prob_drop(victim, doc, 0, "fine", "pos", base_prob=0.7)
    assert seen == ["Fine thing"]


# --- contextual filter ----------------------------------------------------------


def ctx_cfg(**kw):
    return AttackConfig(method="mwsaa", context=ContextParams(window=2, gamma=0.5), **kw)


def test_filter_keeps_all_when_small():
    store = make_store({"good": [1, 0], "fine": [0.9, 0.1], "ok": [0.8, 0.2], "thing": [0, 1]})
    doc = tokenize("good thing")
    cands = CandidateSet(0, "good", [Candidate("fine"), Candidate("ok")])
    kept = contextual_filter(store, doc, 0, cands, ctx_cfg(top_k=5))
    assert len(kept.candidates) == 2
    assert all(c.contextual_fit is not None for c in kept.candidates)


def test_filter_identical_vector_fit_one():
    store = make_store({"good": [1, 0], "same": [1, 0], "thing": [0, 1]})
    doc = tokenize("good thing")
    cands = CandidateSet(0, "good", [Candidate("same")])
    kept = contextual_filter(store, doc, 0, cands, ctx_cfg())
    assert kept.candidates[0].contextual_fit == pytest.approx(1.0, abs=1e-9)


def test_filter_truncates_to_top_k():
    store = make_store(
        {"good": [1, 0], "near": [0.95, 0.05], "mid": [0.6, 0.4], "far": [0, 1], "thing": [0.5, 0.5]}
    )
    doc = tokenize("good thing")
    cands = CandidateSet(0, "good", [Candidate("far"), Candidate("near"), Candidate("mid")])
    kept = contextual_filter(store, doc, 0, cands, ctx_cfg(top_k=2))
    assert [c.lemma for c in kept.candidates] == ["near", "mid"]


def test_filter_tie_prefers_lexicographic():
    store = make_store({"good": [1, 0], "bbb": [0, 1], "aaa": [0, 1], "ccc": [1, 0]})
    doc = tokenize("good")
    cands = CandidateSet(0, "good", [Candidate("bbb"), Candidate("aaa"), Candidate("ccc")])
    kept = contextual_filter(store, doc, 0, cands, ctx_cfg(top_k=2))
    # ccc has fit 1; aaa and bbb tie at 0, the smaller lemma survives
    assert [c.lemma for c in kept.candidates] == ["ccc", "aaa"]


# --- semantic select -------------------------------------------------------------


def test_semantic_select_empty():
    store = make_store({"a": [1, 0]})
    assert semantic_select(store, tokenize("a"), 0, CandidateSet(0, "a", []), ctx_cfg()) is None


def test_semantic_select_single_above_threshold(store):
    doc = tokenize("the story is good")
    cands = CandidateSet(3, "good", [Candidate("fine")])
    chosen = semantic_select(store, doc, 3, cands, ctx_cfg(sim_threshold=0.8))
    assert chosen is not None and chosen.lemma == "fine"
    assert chosen.sentence_sim >= 0.8


def test_semantic_select_all_below_high_threshold():
    # 3-token document, candidate nearly orthogonal to the original word:
    # the swapped mean loses enough cosine to fall under tau = 0.99
    store = make_store({"aa": [1, 0, 0], "bb": [0, 1, 0], "cc": [0, 0, 1], "dd": [-1, 0.2, 0]})
    doc = tokenize("aa bb cc")
    va = np.mean([store.table[t] for t in ("aa", "bb", "cc")], axis=0)
    vb = np.mean([store.table[t] for t in ("dd", "bb", "cc")], axis=0)
    oracle = float(np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb)))
    assert oracle < 0.99
    cands = CandidateSet(0, "aa", [Candidate("dd")])
    assert semantic_select(store, doc, 0, cands, ctx_cfg(sim_threshold=0.99)) is None


def test_semantic_select_argmax_similarity(store):
    doc = tokenize("the story is good")
    cands = CandidateSet(3, "good", [Candidate("fine"), Candidate("terrible")])
    chosen = semantic_select(store, doc, 3, cands, ctx_cfg(sim_threshold=0.0))
    assert chosen.lemma == "fine"


def test_semantic_select_tie_breaks_on_drop_then_lemma():
    store = make_store({"aa": [1, 0], "xx": [0, 1], "yy": [0, 1], "bb": [1, 0]})
    doc = tokenize("aa bb")
    c1, c2 = Candidate("xx", prob_drop=0.1), Candidate("yy", prob_drop=0.3)
    chosen = semantic_select(store, doc, 0, CandidateSet(0, "aa", [c1, c2]), ctx_cfg(sim_threshold=0.0))
    assert chosen.lemma == "yy"  # equal sims, larger drop wins
    c2.prob_drop = 0.1
    chosen = semantic_select(store, doc, 0, CandidateSet(0, "aa", [c1, c2]), ctx_cfg(sim_threshold=0.0))
    assert chosen.lemma == "xx"  # full tie, lexicographic


def test_semantic_select_max_drop_variant(store):
    doc = tokenize("the story is good")
    cands = CandidateSet(
        3, "good", [Candidate("fine", prob_drop=0.1), Candidate("solid", prob_drop=0.4)]
    )
    chosen = semantic_select(store, doc, 3, cands, ctx_cfg(sim_threshold=0.8, mwsaa_selection="max_drop"))
    assert chosen.lemma == "solid"


# --- pwws selection ---------------------------------------------------------------


def test_pwws_deterministic_argmax():
    victim = WordWeightVictim({"good": 0.0, "fine": 0.1, "solid": 0.3})
    doc = tokenize("good thing")
    cands = CandidateSet(0, "good", [Candidate("fine"), Candidate("solid")])
    cfg = AttackConfig(method="pwws", selection="deterministic")
    chosen = select_substitute_pwws(victim, doc, 0, cands, cfg, derive_rng(1, 0))
    assert chosen.lemma == "solid"
    assert chosen.prob_drop == pytest.approx(0.3)


def test_pwws_deterministic_tie_lexicographic():
    victim = WordWeightVictim({"good": 0.0, "xx": 0.2, "aa": 0.2})
    doc = tokenize("good thing")
    cands = CandidateSet(0, "good", [Candidate("xx"), Candidate("aa")])
    cfg = AttackConfig(method="pwws", selection="deterministic")
    chosen = select_substitute_pwws(victim, doc, 0, cands, cfg, derive_rng(1, 0))
    assert chosen.lemma == "aa"


def test_pwws_randomized_uniform_when_degenerate():
    victim = WordWeightVictim({"good": 0.0, "a": 0.1, "b": 0.2, "c": 0.3})
    doc = tokenize("good thing")
    cfg = AttackConfig(method="pwws", selection="randomized", alpha=0.0, beta=0.0)
    rng = derive_rng(123, 0)
    counts = {"a": 0, "b": 0, "c": 0}
    for _ in range(10000):
        cands = CandidateSet(0, "good", [Candidate("a"), Candidate("b"), Candidate("c")])
        chosen = select_substitute_pwws(victim, doc, 0, cands, cfg, rng, y_star="pos", base_prob=0.9)
        counts[chosen.lemma] += 1
    for lemma in counts:
        assert abs(counts[lemma] / 10000 - 1 / 3) < 0.02


def test_pwws_randomized_seed_reproducible():
    victim = WordWeightVictim({"good": 0.0, "a": 0.1, "b": 0.2})
    doc = tokenize("good thing")
    cfg = AttackConfig(method="pwws", selection="randomized")

    def run():
        rng = derive_rng(77, 3)
        cands = CandidateSet(0, "good", [Candidate("a"), Candidate("b")])
        return select_substitute_pwws(victim, doc, 0, cands, cfg, rng).lemma

    assert run() == run()


def test_pwws_empty_candidates_none():
    victim = WordWeightVictim({})
    cfg = AttackConfig(method="pwws")
    got = select_substitute_pwws(victim, tokenize("x y"), 0, CandidateSet(0, "x", []), cfg, derive_rng(1, 0))
    assert got is None


# --- replacement order ------------------------------------------------------------


def sal_of(weights):
    positions = tuple(weights)
    return SaliencyVector(positions=positions, scores={p: 0.0 for p in positions}, weights=weights)


def test_order_single_position():
    sal = sal_of({2: 1.0})
    cfg = AttackConfig(method="pwws")
    assert replacement_order(sal, {2: Candidate("x", prob_drop=0.1)}, cfg) == [2]


def test_order_pwws_arithmetic():
    sal = sal_of({0: 0.5, 1: 0.5})
    chosen = {0: Candidate("x", prob_drop=0.2), 1: Candidate("y", prob_drop=0.1)}
    assert replacement_order(sal, chosen, AttackConfig(method="pwws")) == [0, 1]


def test_order_mwsaa_similarity_factor():
    sal = sal_of({0: 0.5, 1: 0.5})
    chosen = {
        0: Candidate("x", prob_drop=0.2, sentence_sim=0.90),
        1: Candidate("y", prob_drop=0.2, sentence_sim=0.99),
    }
    cfg = AttackConfig(method="mwsaa", feedback_lambda=1.0)
    assert replacement_order(sal, chosen, cfg) == [1, 0]


def test_order_mwsaa_lambda_zero_reduces_to_pwws():
    sal = sal_of({0: 0.6, 1: 0.4})
    chosen = {
        0: Candidate("x", prob_drop=0.1, sentence_sim=0.2),
        1: Candidate("y", prob_drop=0.3, sentence_sim=0.99),
    }
    pwws_order = replacement_order(sal, chosen, AttackConfig(method="pwws"))
    mwsaa_order = replacement_order(sal, chosen, AttackConfig(method="mwsaa", feedback_lambda=0.0))
    assert mwsaa_order == pwws_order


def test_order_negative_similarity_clamped():
    sal = sal_of({0: 0.5, 1: 0.5})
    chosen = {
        0: Candidate("x", prob_drop=0.2, sentence_sim=-0.5),
        1: Candidate("y", prob_drop=0.01, sentence_sim=0.9),
    }
    cfg = AttackConfig(method="mwsaa")
    assert replacement_order(sal, chosen, cfg) == [1, 0]  # clamped 0 falls behind


def test_order_tie_ascending_position():
    sal = sal_of({3: 0.5, 1: 0.5})
    chosen = {3: Candidate("x", prob_drop=0.2), 1: Candidate("y", prob_drop=0.2)}
    assert replacement_order(sal, chosen, AttackConfig(method="pwws")) == [1, 3]


# --- full attack -------------------------------------------------------------------


def test_attack_stopword_only_skipped(db, store, stopwords, nb_victim, pwws_cfg):
    res = attack(nb_victim, db, store, "it was the of and", pwws_cfg, stopwords=stopwords)
    assert res.status == "skipped_nothing_attackable"
    assert res.queries <= 1
    assert res.adversarial_text == "it was the of and"
    assert res.substitutions == []


def test_attack_empty_text_skipped(db, store, stopwords, nb_victim, pwws_cfg):
    res = attack(nb_victim, db, store, "", pwws_cfg, stopwords=stopwords)
    assert res.status == "skipped_nothing_attackable"


def test_attack_query_enumeration(db, store, pwws_cfg):
    # hand enumeration on "good movie": 1 original + 2 saliency probes
    # + 5 candidates for good + 3 for movie + 1 check of the first splice
    victim = train_naive_bayes([("good movie", "pos"), ("bad movie", "neg")], smoothing=1.0)
    counter = QueryCounter(victim)
    res = attack(counter, db, store, "good movie", pwws_cfg, stopwords=frozenset())
    assert res.status == "success"
    assert len(res.substitutions) == 1
    assert res.queries == 1 + 2 + 5 + 3 + 1
    assert res.queries == counter.count


def test_attack_budget_one(db, store, stopwords, nb_victim, pwws_cfg, toy_corpus):
    cfg = AttackConfig(method="pwws", query_budget=1)
    res = attack(nb_victim, db, store, toy_corpus.samples[0][0], cfg, stopwords=stopwords)
    assert res.status == "budget_exhausted"
    assert res.queries == 1
    assert res.substitutions == []
    assert res.final_label == res.original_label


def test_attack_budget_respected_at_all_levels(db, store, stopwords, nb_victim, toy_corpus):
    text = toy_corpus.samples[0][0]
    for budget in (1, 2, 3, 5, 8, 13, 21, 1000):
        cfg = AttackConfig(method="pwws", query_budget=budget)
        res = attack(nb_victim, db, store, text, cfg, stopwords=stopwords)
        assert res.queries <= budget


def test_attack_trace_reproduces_adversarial_text(db, store, stopwords, nb_victim, toy_corpus):
    cfg = AttackConfig(method="pwws")
    for text, _ in toy_corpus.samples[:12]:
        res = attack(nb_victim, db, store, text, cfg, stopwords=stopwords)
        assert splice(tokenize(text), res.substitutions) == res.adversarial_text


def test_attack_success_consistency(db, store, stopwords, nb_victim, toy_corpus):
    cfg = AttackConfig(method="pwws")
    for text, _ in toy_corpus.samples[:12]:
        res = attack(nb_victim, db, store, text, cfg, stopwords=stopwords)
        final = nb_victim.predict_proba(res.adversarial_text).top_label
        assert (res.status == "success") == (final != res.original_label)
        if res.status == "success":
            assert res.final_label == final


def test_attack_deterministic(db, store, stopwords, nb_victim, toy_corpus):
    for method in ("pwws", "mwsaa"):
        cfg = AttackConfig(method=method, seed=99)
        text = toy_corpus.samples[4][0]
        a = attack(nb_victim, db, store, text, cfg, stopwords=stopwords, sample_index=4)
        b = attack(nb_victim, db, store, text, cfg, stopwords=stopwords, sample_index=4)
        for f in dataclasses.fields(a):
            if f.name == "elapsed":
                continue
            assert getattr(a, f.name) == getattr(b, f.name), f.name


def test_attack_mwsaa_threshold_guarantee(db, store, stopwords, nb_victim, toy_corpus, mwsaa_cfg):
    from textfray.embeddings import sentence_similarity

    for text, _ in toy_corpus.samples[:16]:
        res = attack(nb_victim, db, store, text, mwsaa_cfg, stopwords=stopwords)
        doc = tokenize(text)
        originals = [t.surface for t in doc.tokens]
        for sub in res.substitutions:
            swapped = list(originals)
            swapped[sub.position] = sub.replacement_lemma
            sim = sentence_similarity(store, originals, swapped)
            assert sim >= mwsaa_cfg.sim_threshold - 1e-9


def test_attack_query_error_propagates(db, store, stopwords, pwws_cfg):
    class Failing:
        def labels(self):
            return ("neg", "pos")

        def predict_proba(self, text):
            raise QueryError("server down")

    with pytest.raises(QueryError):
        attack(Failing(), db, store, "a good film", pwws_cfg, stopwords=stopwords)


def test_attack_randomized_matches_seed(db, store, stopwords, nb_victim, toy_corpus):
    cfg = AttackConfig(method="pwws", selection="randomized", seed=5)
    text = toy_corpus.samples[2][0]
    a = attack(nb_victim, db, store, text, cfg, stopwords=stopwords, sample_index=2)
    b = attack(nb_victim, db, store, text, cfg, stopwords=stopwords, sample_index=2)
    assert [s.replacement_lemma for s in a.substitutions] == [
        s.replacement_lemma for s in b.substitutions
    ]


def test_attack_config_validation():
    with pytest.raises(ValueError):
        AttackConfig(method="other")
    with pytest.raises(ValueError):
        AttackConfig(top_k=0)
    with pytest.raises(ValueError):
        AttackConfig(sim_threshold=1.5)
    with pytest.raises(ValueError):
        AttackConfig(query_budget=0)
    with pytest.raises(ValueError):
        AttackConfig(alpha=-1.0)
    with pytest.raises(ValueError):
        AttackConfig(mwsaa_selection="weird")
