"""Tokenization with exact source spans, splice-based reconstruction and casing.

Tokens are maximal alphabetic runs (internal apostrophes allowed, so "don't"
stays one token); digit runs and punctuation become non-word tokens and
whitespace is never a token.  Every token records the half-open span of the
characters it was cut from, which makes reconstruction by span splicing exact:
``splice(tokenize(t), []) == t`` for any text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

# Word tokens: alphabetic runs joined by single internal apostrophes.
# Digit runs and any other non-space character are kept as non-word tokens so
# that spans cover everything except whitespace.
_TOKEN_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*|\d+|\S")
_WORD_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*\Z")


@dataclass(frozen=True)
class Token:
    """One token plus the span of source characters it covers."""

    surface: str
    start: int
    end: int
    normalized: str
    attackable: bool

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Document:
    """Source text together with its ordered, non-overlapping tokens."""

    source: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Substitution:
    """A single token replacement, addressed by token index."""

    position: int
    original_surface: str
    replacement_surface: str
    replacement_lemma: str


def tokenize(text: str) -> Document:
    """Split ``text`` into span-annotated tokens.

    Word tokens (alphabetic runs with internal apostrophes) are marked
    attackable; digits and punctuation are not.  Empty input yields an empty
    token list.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group(0)
        is_word = _WORD_RE.match(surface) is not None
        tokens.append(
            Token(
                surface=surface,
                start=m.start(),
                end=m.end(),
                normalized=surface.lower(),
                attackable=is_word,
            )
        )
    return Document(source=text, tokens=tuple(tokens))


def splice(doc: Document, subs: Sequence[Substitution]) -> str:
    """Rebuild ``doc.source`` with each substituted span replaced.

    All characters outside the substituted spans (spacing, punctuation, the
    other tokens) are preserved exactly.  Raises ``ValueError`` on duplicate
    or out-of-range positions.
    """
    if not subs:
        return doc.source
    seen: set[int] = set()
    for sub in subs:
        if sub.position < 0 or sub.position >= len(doc.tokens):
            raise ValueError(f"substitution position {sub.position} out of range")
        if sub.position in seen:
            raise ValueError(f"duplicate substitution position {sub.position}")
        seen.add(sub.position)
    pieces = []
    cursor = 0
    for sub in sorted(subs, key=lambda s: s.position):
        tok = doc.tokens[sub.position]
        pieces.append(doc.source[cursor : tok.start])
        pieces.append(sub.replacement_surface)
        cursor = tok.end
    pieces.append(doc.source[cursor:])
    return "".join(pieces)


def transfer_case(original_surface: str, replacement_lemma: str) -> str:
    """Carry the original token's casing pattern onto a lowercase replacement.

    All-caps originals yield all-caps replacements, initial capitals carry
    over, anything else passes the replacement through unchanged.
    """
    if not replacement_lemma:
        raise ValueError("replacement lemma must be non-empty")
    if original_surface.isupper() and len(original_surface) > 1:
        return replacement_lemma.upper()
    if original_surface[:1].isupper():
        return replacement_lemma[:1].upper() + replacement_lemma[1:]
    return replacement_lemma


def is_attackable(token: Token, stopwords: frozenset[str] | set[str]) -> bool:
    """True for word tokens of length >= 2 whose lowercase form is no stopword."""
    return token.attackable and len(token.normalized) >= 2 and token.normalized not in stopwords


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one lowercase word per line, ``#`` comments."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.add(line.lower())
    return frozenset(words)


def attackable_positions(doc: Document, stopwords: frozenset[str] | set[str]) -> list[int]:
    """Indices of tokens that pass :func:`is_attackable`."""
    return [i for i, tok in enumerate(doc.tokens) if is_attackable(tok, stopwords)]


def word_token_count(doc: Document) -> int:
    """Number of alphabetic (word) tokens, the replacement-rate denominator."""
    return sum(1 for tok in doc.tokens if tok.attackable)


def apply_to_token_list(tokens: Iterable[Token], position: int, replacement: str) -> list[str]:
    """Token surfaces with one surface swapped; used for similarity probes."""
    out = [tok.surface for tok in tokens]
    out[position] = replacement
    return out
