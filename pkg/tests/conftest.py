from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from sentselect import Corpus, Document

PERSIAN_LETTERS = "ابپتثجچحخدذرزژسشصضطظعغفقکگلمنوهی"

persian_tokens = st.text(alphabet=PERSIAN_LETTERS, min_size=1, max_size=12)


@pytest.fixture
def toy_corpus() -> Corpus:
    """Four documents, disjoint polar vocabularies plus one shared token."""
    return Corpus.build([
        Document("p1", "good great fine", "positive"),
        Document("p2", "good nice fine", "positive"),
        Document("n1", "bad awful fine", "negative"),
        Document("n2", "bad poor fine", "negative"),
    ])


def random_labeled_corpus(
    rng: random.Random,
    n_docs: int,
    vocab_size: int,
    max_len: int = 8,
    id_prefix: str = "d",
) -> Corpus:
    """A small random corpus with at least one document per class."""
    vocab = [f"t{i}" for i in range(vocab_size)]
    docs = []
    for i in range(n_docs):
        if i == 0:
            label = "negative"
        elif i == 1:
            label = "positive"
        else:
            label = rng.choice(("negative", "positive"))
        tokens = rng.choices(vocab, k=rng.randint(1, max_len))
        docs.append(Document(f"{id_prefix}{i}", " ".join(tokens), label))
    return Corpus.build(docs, classes=("negative", "positive"))
