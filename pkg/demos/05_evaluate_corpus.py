"""Corpus-level evaluation: both methods plus the random-choice baseline."""

from textfray import AttackConfig, train_naive_bayes
from textfray.evaluate import comparison_markdown, load_dataset, run_evaluation
from textfray.resources import (
    default_embeddings,
    default_stopwords,
    default_wordnet,
    toy_corpus_path,
)

corpus = load_dataset(toy_corpus_path(), "csv")
victim = train_naive_bayes(list(corpus.samples), smoothing=1.0)
db = default_wordnet()
store = default_embeddings()
stopwords = default_stopwords()

configs = {
    "pwws": AttackConfig(method="pwws"),
    "mwsaa": AttackConfig(method="mwsaa"),
    "random": AttackConfig(method="pwws", selection="randomized", alpha=0.0, beta=0.0),
}

reports = {}
for name, cfg in configs.items():
    reports[name] = run_evaluation(
        victim, db, store, corpus, cfg,
        sample_limit=len(corpus), stopwords=stopwords, victim_name="nb:toy",
    )
    a = reports[name].aggregates
    print(f"{name:7s} success={a['attack_success_rate']:.2f}%"
          f" queries={a['avg_queries']:.1f}"
          f" accuracy {a['clean_accuracy']:.1f}% -> {a['accuracy_under_attack']:.1f}%"
          f" final_sim={a['mean_final_similarity']:.4f}")

print()
print(comparison_markdown({k: reports[k] for k in ("pwws", "mwsaa")}))
