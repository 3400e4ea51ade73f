"""Princeton-WordNet-format database parsing, lemmatization and synonym lookup.

Reads the plain-text database layout of WordNet 3.x: per part of speech an
``index.<pos>`` file mapping lemmas to synset offsets, a ``data.<pos>`` file
holding the synsets themselves, and a ``<pos>.exc`` exception list of
irregular inflections.  Only synset membership is materialized; glosses and
pointer relations are skipped.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataFormatError


class PosTag(enum.Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adj"
    ADVERB = "adv"


# Single-letter synset type codes used inside the data files.  Adjective
# satellites ('s') live in data.adj and collapse onto ADJECTIVE here.
_SS_TYPE = {
    "n": PosTag.NOUN,
    "v": PosTag.VERB,
    "a": PosTag.ADJECTIVE,
    "s": PosTag.ADJECTIVE,
    "r": PosTag.ADVERB,
}

# Morphy-style suffix detachment rules, applied when the exception list has
# no hit.  Pairs are (suffix, replacement).
_DETACHMENT_RULES: dict[PosTag, tuple[tuple[str, str], ...]] = {
    PosTag.NOUN: (
        ("s", ""),
        ("ses", "s"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("ies", "y"),
    ),
    PosTag.VERB: (
        ("s", ""),
        ("ies", "y"),
        ("es", "e"),
        ("es", ""),
        ("ed", "e"),
        ("ed", ""),
        ("ing", "e"),
        ("ing", ""),
    ),
    PosTag.ADJECTIVE: (
        ("er", ""),
        ("est", ""),
        ("er", "e"),
        ("est", "e"),
    ),
    PosTag.ADVERB: (),
}

# Syntactic position markers appended to some adjective lemmas, e.g. "spade(a)".
_MARKER_RE = re.compile(r"\([a-z]+\)$")


@dataclass
class LexicalDb:
    """Parsed database: lemma index, synset membership and exception lists."""

    index: dict[tuple[str, PosTag], tuple[int, ...]] = field(default_factory=dict)
    synsets: dict[tuple[PosTag, int], tuple[str, ...]] = field(default_factory=dict)
    exceptions: dict[tuple[PosTag, str], tuple[str, ...]] = field(default_factory=dict)

    def lemmas(self) -> list[str]:
        """All indexed lemmas, deduplicated across parts of speech, sorted."""
        return sorted({lemma for lemma, _ in self.index})

    def synset_count(self, pos: PosTag) -> int:
        return sum(1 for p, _ in self.synsets if p is pos)


def _parse_index_line(line: str, lineno: int, pos: PosTag, path: Path):
    fields = line.split()
    try:
        lemma = fields[0].lower()
        synset_cnt = int(fields[2])
        p_cnt = int(fields[3])
        offsets = tuple(int(x) for x in fields[4 + p_cnt + 2 :])
        if len(offsets) != synset_cnt:
            raise ValueError("offset count mismatch")
    except (IndexError, ValueError) as exc:
        raise DataFormatError(f"{path}:{lineno}: malformed index line ({exc})") from exc
    return lemma, offsets


def _parse_data_line(line: str, lineno: int, path: Path):
    fields = line.split()
    try:
        offset = int(fields[0])
        ss_type = fields[2]
        if ss_type not in _SS_TYPE:
            raise ValueError(f"unknown synset type {ss_type!r}")
        w_cnt = int(fields[3], 16)
        if w_cnt < 1:
            raise ValueError("synset with no words")
        words = []
        for i in range(w_cnt):
            raw = fields[4 + 2 * i]
            words.append(_MARKER_RE.sub("", raw).lower())
    except (IndexError, ValueError) as exc:
        raise DataFormatError(f"{path}:{lineno}: malformed data line ({exc})") from exc
    return offset, tuple(words)


def load_wordnet(directory) -> LexicalDb:
    """Parse a WordNet 3.x database directory into a :class:`LexicalDb`.

    Expects ``index.{noun,verb,adj,adv}``, ``data.{noun,verb,adj,adv}`` and
    ``{noun,verb,adj,adv}.exc``.  License/header lines (leading spaces) are
    skipped.  Raises :class:`DataFormatError` naming the missing file or the
    offending line.
    """
    root = Path(directory)
    db = LexicalDb()
    for pos in PosTag:
        suffix = pos.value
        for name in (f"index.{suffix}", f"data.{suffix}", f"{suffix}.exc"):
            if not (root / name).is_file():
                raise DataFormatError(f"wordnet directory {root} is missing {name}")

    for pos in PosTag:
        path = root / f"index.{pos.value}"
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.startswith(" ") or not line.strip():
                    continue
                lemma, offsets = _parse_index_line(line, lineno, pos, path)
                db.index[(lemma, pos)] = offsets

        path = root / f"data.{pos.value}"
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.startswith(" ") or not line.strip():
                    continue
                offset, words = _parse_data_line(line, lineno, path)
                db.synsets[(pos, offset)] = words

        path = root / f"{pos.value}.exc"
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                fields = line.split()
                if not fields:
                    continue
                if len(fields) < 2:
                    raise DataFormatError(f"{path}:{lineno}: malformed exception line")
                db.exceptions[(pos, fields[0].lower())] = tuple(w.lower() for w in fields[1:])

    for (lemma, pos), offsets in db.index.items():
        for offset in offsets:
            if (pos, offset) not in db.synsets:
                raise DataFormatError(
                    f"index entry {lemma!r}/{pos.value} references missing synset {offset}"
                )
    return db


def lemmatize(db: LexicalDb, surface: str, pos: PosTag) -> set[str]:
    """Map an inflected lowercase surface form to indexed base lemmas.

    Exception-list hits win; otherwise the per-pos suffix detachment rules
    apply.  Results are restricted to lemmas actually indexed under ``pos``;
    the surface itself is included when it is indexed.  Unknown words yield
    an empty set.
    """
    found: set[str] = set()
    if (surface, pos) in db.index:
        found.add(surface)

    exc = db.exceptions.get((pos, surface), ())
    exc_hits = {base for base in exc if (base, pos) in db.index}
    if exc_hits:
        return found | exc_hits

    for suffix, repl in _DETACHMENT_RULES[pos]:
        if surface.endswith(suffix) and len(surface) > len(suffix):
            candidate = surface[: -len(suffix)] + repl
            if (candidate, pos) in db.index:
                found.add(candidate)
    return found


def synonyms(db: LexicalDb, lemma: str, include_multiword: bool = False) -> set[str]:
    """Union of co-members of every synset containing ``lemma``, across pos.

    The lemma itself is excluded; multiword (underscore-joined) lemmas are
    excluded unless requested.  Unknown lemmas yield an empty set.
    """
    out: set[str] = set()
    for pos in PosTag:
        offsets = db.index.get((lemma, pos))
        if not offsets:
            continue
        for offset in offsets:
            for word in db.synsets[(pos, offset)]:
                if word == lemma:
                    continue
                if not include_multiword and "_" in word:
                    continue
                out.add(word)
    return out
