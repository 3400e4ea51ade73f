#!/usr/bin/env python3
"""Run the toy-corpus evaluation once and freeze the expected outcomes.

The committed output (tests/data/preregistered.json) pins the directional
acceptance checks — attack success rates, accuracy degradation, final
similarity means — to one concrete, reproducible run (seed 42, bundled
resources).  Re-run after changing the corpus, lexicon or vectors:

    python tools/preregister.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from textfray.attack import AttackConfig
from textfray.evaluate import load_dataset, run_evaluation
from textfray.resources import (
    default_embeddings,
    default_stopwords,
    default_wordnet,
    toy_corpus_path,
)
from textfray.victim import train_naive_bayes

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "preregistered.json"

CONFIGS = {
    "pwws": AttackConfig(method="pwws"),
    "mwsaa": AttackConfig(method="mwsaa"),
    "baseline": AttackConfig(method="pwws", selection="randomized", alpha=0.0, beta=0.0),
}


def main() -> int:
    corpus = load_dataset(toy_corpus_path(), "csv")
    victim = train_naive_bayes(list(corpus.samples), smoothing=1.0)
    db = default_wordnet()
    store = default_embeddings()
    stopwords = default_stopwords()

    methods = {}
    success_sims = {}
    for name, cfg in CONFIGS.items():
        report = run_evaluation(
            victim, db, store, corpus, cfg,
            sample_limit=len(corpus), stopwords=stopwords, victim_name="nb:toy",
        )
        agg = report.aggregates
        methods[name] = {
            "attacked_count": agg["attacked_count"],
            "successes": agg["successes"],
            "attack_success_rate": agg["attack_success_rate"],
            "clean_accuracy": agg["clean_accuracy"],
            "accuracy_under_attack": agg["accuracy_under_attack"],
            "mean_replacement_rate": agg["mean_replacement_rate"],
            "mean_final_similarity": agg["mean_final_similarity"],
        }
        success_sims[name] = {
            r.sample_id: r.result.final_similarity
            for r in report.records
            if r.result is not None and r.result.success
        }

    common = sorted(set(success_sims["pwws"]) & set(success_sims["mwsaa"]))
    payload = {
        "seed": 42,
        "sample_limit": len(corpus),
        "methods": methods,
        "common_successes": len(common),
        "common_mean_final_similarity": {
            name: sum(success_sims[name][i] for i in common) / len(common)
            for name in ("pwws", "mwsaa")
        },
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")
    print(json.dumps(payload["methods"], indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
