"""Word-substitution adversarial attacks on black-box text classifiers."""

from .attack import (
    AttackConfig,
    AttackResult,
    attack,
    generate_candidates,
    replacement_order,
    saliency,
    softmax,
)
from .embeddings import ContextParams, EmbeddingStore, cosine, load_embeddings
from .errors import DataFormatError, QueryError, TextfrayError, TrainingError
from .evaluate import EvalReport, load_dataset, run_evaluation, success_rate
from .text import Document, Substitution, Token, splice, tokenize, transfer_case
from .victim import (
    NaiveBayesVictim,
    ProbDist,
    QueryCounter,
    RemoteVictim,
    counted,
    train_naive_bayes,
)
from .wordnet import LexicalDb, PosTag, lemmatize, load_wordnet, synonyms

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "AttackResult",
    "ContextParams",
    "DataFormatError",
    "Document",
    "EmbeddingStore",
    "EvalReport",
    "LexicalDb",
    "NaiveBayesVictim",
    "PosTag",
    "ProbDist",
    "QueryCounter",
    "QueryError",
    "RemoteVictim",
    "Substitution",
    "TextfrayError",
    "Token",
    "TrainingError",
    "attack",
    "cosine",
    "counted",
    "generate_candidates",
    "lemmatize",
    "load_dataset",
    "load_embeddings",
    "load_wordnet",
    "replacement_order",
    "run_evaluation",
    "saliency",
    "softmax",
    "splice",
    "success_rate",
    "synonyms",
    "tokenize",
    "train_naive_bayes",
    "transfer_case",
]
