import pytest

from textfray.attack import AttackConfig
from textfray.evaluate import load_dataset
from textfray.resources import (
    default_embeddings,
    default_stopwords,
    default_wordnet,
    toy_corpus_path,
)
from textfray.victim import train_naive_bayes


@pytest.fixture(scope="session")
def db():
    return default_wordnet()


@pytest.fixture(scope="session")
def store():
    return default_embeddings()


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture(scope="session")
def toy_corpus():
    return load_dataset(toy_corpus_path(), "csv")


@pytest.fixture(scope="session")
def nb_victim(toy_corpus):
    return train_naive_bayes(list(toy_corpus.samples), smoothing=1.0)


@pytest.fixture()
def pwws_cfg():
    return AttackConfig(method="pwws")


@pytest.fixture()
def mwsaa_cfg():
    return AttackConfig(method="mwsaa")
