"""Access to the bundled desk-scale resources.

The package ships a small English stopword list, a miniature synonym
database in WordNet 3.x file format, a matching set of static word vectors
and a toy sentiment corpus, so the whole attack pipeline runs self-contained.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources as importlib_resources
from pathlib import Path

from .embeddings import EmbeddingStore, load_embeddings
from .text import load_stopwords
from .wordnet import LexicalDb, load_wordnet


def data_path(*parts: str) -> Path:
    root = importlib_resources.files("textfray") / "data"
    return Path(str(root.joinpath(*parts)))


def default_stopwords_path() -> Path:
    return data_path("stopwords.txt")


def default_wordnet_dir() -> Path:
    return data_path("wordnet")


def default_embeddings_path() -> Path:
    return data_path("vectors.txt")


def toy_corpus_path() -> Path:
    return data_path("toy_reviews.csv")


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return load_stopwords(default_stopwords_path())


@lru_cache(maxsize=1)
def default_wordnet() -> LexicalDb:
    return load_wordnet(default_wordnet_dir())


@lru_cache(maxsize=1)
def default_embeddings() -> EmbeddingStore:
    return load_embeddings(default_embeddings_path())
