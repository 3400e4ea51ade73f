"""Word vectors, contextual mixing and sentence-level cosine similarity."""

from textfray import cosine, tokenize
from textfray.embeddings import ContextParams, contextual_vector, sentence_similarity
from textfray.resources import default_embeddings

store = default_embeddings()
print(f"{len(store)} vectors, dim {store.dim}\n")

# synonyms share a base direction; unrelated words sit near zero
pairs = [("good", "fine"), ("good", "estimable"), ("good", "terrible"), ("good", "film")]
for a, b in pairs:
    sim = cosine(store.word_vector(a), store.word_vector(b))
    print(f"cosine({a!r}, {b!r}) = {sim:+.4f}")

# a contextual vector mixes the word with its window neighbours
doc = tokenize("the slow story turns into a wonderful finish")
params = ContextParams(window=3, gamma=0.5)
base = contextual_vector(store, doc, 1, None, params)
for candidate in ("sluggish", "laggard", "wonderful"):
    swapped = contextual_vector(store, doc, 1, candidate, params)
    print(f"contextual fit of {candidate!r} for 'slow': {cosine(base, swapped):.4f}")

# swapping one word barely moves the sentence vector when the substitute is close
original = [t.surface for t in doc.tokens]
for candidate in ("sluggish", "terrible"):
    swapped = list(original)
    swapped[1] = candidate
    print(f"sentence similarity after slow->{candidate}: "
          f"{sentence_similarity(store, original, swapped):.4f}")
