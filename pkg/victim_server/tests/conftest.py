import re
import socket
import threading
import time

import pytest
import torch
import uvicorn
from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

from victim_server import ServerConfig, create_app

from textfray.evaluate import load_dataset
from textfray.resources import toy_corpus_path

_WORD_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*|\d+|\S")

LABELS = ("neg", "pos")


def build_tiny_checkpoint(out_dir):
    """Train a small BERT classifier on the toy corpus and save it.

    The vocabulary is exactly the corpus tokens, so synonym substitutes fall
    back to [UNK] the same way they do for the bundled naive Bayes victim.
    Training is seeded and stops once the corpus is fitted (the one
    duplicated both-label text keeps accuracy below 100%).
    """
    corpus = load_dataset(toy_corpus_path(), "csv")
    texts = [t for t, _ in corpus.samples]
    targets = torch.tensor([LABELS.index(label) for _, label in corpus.samples])

    tokens = sorted({m.group(0).lower() for t in texts for m in _WORD_RE.finditer(t)})
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + tokens
    vocab_file = out_dir / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file), do_lower_case=True, model_max_length=40)

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=40,
        num_labels=len(LABELS),
        id2label=dict(enumerate(LABELS)),
        label2id={l: i for i, l in enumerate(LABELS)},
    )
    model = BertForSequenceClassification(config)
    encoded = tokenizer(texts, padding=True, truncation=True, max_length=40, return_tensors="pt")
    optimizer = torch.optim.AdamW(model.parameters(), lr=5e-3)
    model.train()
    for epoch in range(300):
        optimizer.zero_grad()
        out = model(**encoded, labels=targets)
        out.loss.backward()
        optimizer.step()
        accuracy = (out.logits.argmax(-1) == targets).float().mean().item()
        if epoch >= 20 and accuracy >= 0.95:
            break
    assert accuracy >= 0.95, f"checkpoint failed to fit the corpus ({accuracy:.2f})"
    model.eval()
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return out_dir


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    return build_tiny_checkpoint(tmp_path_factory.mktemp("checkpoint"))


@pytest.fixture(scope="session")
def app(checkpoint):
    return create_app(ServerConfig(model=str(checkpoint), max_batch=8))


@pytest.fixture(scope="session")
def client(app):
    from fastapi.testclient import TestClient

    with TestClient(app) as client:
        yield client


@pytest.fixture(scope="session")
def live_server(app):
    """The app served by a real uvicorn instance on a free local port."""
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}", app
    server.should_exit = True
    thread.join(timeout=10)
