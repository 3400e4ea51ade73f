"""Tokenization with exact spans, and text reconstruction by span splicing."""

from textfray import Substitution, splice, tokenize, transfer_case

text = "The Dog, they say, never stops barking until 3 a.m.!"
doc = tokenize(text)

print("source:", text)
print("tokens:")
for i, tok in enumerate(doc.tokens):
    kind = "word" if tok.attackable else "other"
    print(f"  {i:2d} [{tok.start:2d},{tok.end:2d}) {kind:5s} {tok.surface!r}")

# round trip: splicing with no substitutions reproduces the source exactly
assert splice(doc, []) == text

# replace two tokens; everything between the spans is untouched
subs = [
    Substitution(1, "Dog", transfer_case("Dog", "hound"), "hound"),
    Substitution(7, "barking", "howling", "howling"),
]
print("\nspliced:", splice(doc, subs))

# casing carries over from the original token
for original in ("good", "Good", "GOOD"):
    print(f"transfer_case({original!r}, 'fine') -> {transfer_case(original, 'fine')!r}")
