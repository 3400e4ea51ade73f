"""One attack end to end: saliency, candidate scoring, greedy substitution."""

from textfray import AttackConfig, attack, train_naive_bayes
from textfray.evaluate import load_dataset
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

text = "A great film with a slow first act."
print("text:", text)
print("clean prediction:", victim.predict_proba(text).top_label, "\n")

for method in ("pwws", "mwsaa"):
    cfg = AttackConfig(method=method)
    result = attack(victim, db, store, text, cfg, stopwords=stopwords)
    print(f"[{method}] {result.status}: {result.original_label} -> {result.final_label}")
    print(f"  adversarial: {result.adversarial_text}")
    print(f"  queries={result.queries} final_similarity={result.final_similarity:.4f}")
    for step in result.steps:
        sub = step.substitution
        sim = "n/a" if step.sentence_sim is None else f"{step.sentence_sim:.4f}"
        print(f"  {sub.original_surface} -> {sub.replacement_surface}"
              f"  dP={step.prob_drop:+.4f} sim={sim}")
    print()
