"""Parsing the WordNet-format lexicon: lemmatization and synonym lookup."""

from textfray import PosTag, lemmatize, synonyms
from textfray.resources import default_wordnet, default_wordnet_dir

db = default_wordnet()
print(f"loaded {default_wordnet_dir()}")
for pos in PosTag:
    print(f"  {pos.value:5s}: {db.synset_count(pos):3d} synsets")
print(f"  {len(db.lemmas())} distinct lemmas\n")

# morphy-style lemmatization: exception list first, then suffix rules
for surface, pos in [("stories", PosTag.NOUN), ("slower", PosTag.ADJECTIVE),
                     ("told", PosTag.VERB), ("better", PosTag.ADJECTIVE)]:
    print(f"lemmatize({surface!r}, {pos.value}) -> {sorted(lemmatize(db, surface, pos))}")

print()
for lemma in ("labour", "good", "boring", "dog"):
    print(f"synonyms({lemma!r}) -> {sorted(synonyms(db, lemma))}")

# multiword lemmas are parsed but excluded from substitution candidates
print(f"\nwith multiword: {sorted(synonyms(db, 'dog', include_multiword=True))}")
