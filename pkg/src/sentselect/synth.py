"""Seeded synthetic polarity corpora for desk-scale experiments.

Documents are drawn from two class-conditional multinomials over a shared
vocabulary: a Zipf-weighted neutral bulk plus a set of planted polar
features whose weight is boosted by ``polarity_strength`` inside their own
class. With strength 1 the classes are exchangeable.

``generate_morph_benchmark`` additionally renders planted features through
surface variants (affixed forms, a verbal prefix, and compounds written
either with a space or with a zero-width non-joiner) to exercise the
stemming and bigram stages.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import ZWNJ, Corpus, Document

CLASSES = ("negative", "positive")

# polar base weight relative to the 1/rank neutral weights; rank ~40 territory
_POLAR_BASE_WEIGHT = 0.025


@dataclass(frozen=True)
class GeneratorSpec:
    n_docs: int = 400
    class_balance: float = 0.5  # fraction of positive documents
    vocab_size: int = 500
    n_polar_features: int = 40
    polarity_strength: float = 8.0
    doc_length: tuple[int, int] = (40, 80)
    seed: int = 7

    def __post_init__(self) -> None:
        if self.n_docs < 1 or self.vocab_size < 1:
            raise ValueError("n_docs and vocab_size must be positive")
        if not 0 < self.class_balance < 1:
            raise ValueError("class_balance must be in (0, 1)")
        if self.n_polar_features > self.vocab_size:
            raise ValueError("more polar features than vocabulary entries")
        if self.n_polar_features < 0:
            raise ValueError("n_polar_features must be >= 0")
        if self.polarity_strength < 1:
            raise ValueError("polarity_strength must be >= 1")
        lo, hi = self.doc_length
        if lo < 1 or hi < lo:
            raise ValueError("doc_length must satisfy 1 <= min <= max")


def _vocabulary(spec: GeneratorSpec) -> list[str]:
    return [f"w{i:04d}" for i in range(spec.vocab_size)]


def polar_vocabulary(spec: GeneratorSpec) -> dict[str, str]:
    """Planted feature surface -> the class it signals (layout is seed-free)."""
    vocab = _vocabulary(spec)
    n_pos = (spec.n_polar_features + 1) // 2
    mapping = {}
    for surface in vocab[:n_pos]:
        mapping[surface] = "positive"
    for surface in vocab[n_pos:spec.n_polar_features]:
        mapping[surface] = "negative"
    return mapping


def _class_weights(spec: GeneratorSpec) -> dict[str, list[float]]:
    polar = polar_vocabulary(spec)
    vocab = _vocabulary(spec)
    weights = {}
    for cls in CLASSES:
        row = []
        neutral_rank = 0
        for surface in vocab:
            signal = polar.get(surface)
            if signal is None:
                neutral_rank += 1
                row.append(1.0 / neutral_rank)
            elif signal == cls:
                row.append(_POLAR_BASE_WEIGHT * spec.polarity_strength)
            else:
                row.append(_POLAR_BASE_WEIGHT)
        weights[cls] = row
    return weights


def generate(spec: GeneratorSpec) -> tuple[Corpus, frozenset[str]]:
    """Deterministic corpus plus the planted polar feature set."""
    rng = random.Random(spec.seed)
    vocab = _vocabulary(spec)
    weights = _class_weights(spec)
    n_positive = round(spec.n_docs * spec.class_balance)
    lo, hi = spec.doc_length
    documents = []
    for i in range(spec.n_docs):
        label = "positive" if i < n_positive else "negative"
        length = rng.randint(lo, hi)
        tokens = rng.choices(vocab, weights=weights[label], k=length)
        documents.append(Document(id=f"d{i:05d}", raw_text=" ".join(tokens), label=label))
    corpus = Corpus.build(documents, classes=CLASSES)
    return corpus, frozenset(polar_vocabulary(spec))


def ground_truth_tsv(spec: GeneratorSpec) -> str:
    """surface<TAB>signal_class rows for the planted features."""
    return "".join(
        f"{surface}\t{cls}\n" for surface, cls in sorted(polar_vocabulary(spec).items())
    )


def _variant_forms(base: str) -> list[str]:
    return [base, base + "ها", base + ZWNJ + "ها", "می" + ZWNJ + base]


def generate_morph_benchmark(
    n_docs: int = 400,
    seed: int = 7,
    n_inflected: int = 12,
    n_compounds: int = 8,
    neutral_vocab: int = 200,
    doc_length: tuple[int, int] = (10, 20),
) -> Corpus:
    """Corpus whose planted signal hides behind surface variation.

    Inflected polar features occur as one of several affixed forms that all
    stem back to the same base. Compound polar signals are two confound
    tokens (individually common in both classes) written adjacently, either
    space-separated or joined with a zero-width non-joiner, only in their
    own class.
    """
    rng = random.Random(seed)
    neutrals = [f"n{i:04d}" for i in range(neutral_vocab)]
    neutral_weights = [1.0 / (r + 1) for r in range(neutral_vocab)]
    inflected = {
        "positive": [f"goodsig{i:02d}" for i in range(n_inflected)],
        "negative": [f"badsig{i:02d}" for i in range(n_inflected)],
    }
    compounds = {
        "positive": [(f"cmpa{i:02d}", f"cmpb{i:02d}") for i in range(n_compounds)],
        "negative": [(f"cmpc{i:02d}", f"cmpd{i:02d}") for i in range(n_compounds)],
    }
    confounds = [tok for pairs in compounds.values() for pair in pairs for tok in pair]

    n_positive = n_docs // 2
    lo, hi = doc_length
    documents = []
    for i in range(n_docs):
        label = "positive" if i < n_positive else "negative"
        other = "negative" if label == "positive" else "positive"
        # atoms keep injected compound pairs adjacent through the shuffle
        atoms: list[list[str]] = [
            [t] for t in rng.choices(neutrals, weights=neutral_weights, k=rng.randint(lo, hi))
        ]
        # own-class inflected signals, rendered through a random surface variant
        for base in rng.sample(inflected[label], k=2):
            atoms.append([rng.choice(_variant_forms(base))])
        # occasional off-class occurrence keeps the signal imperfect
        if rng.random() < 0.25:
            atoms.append([rng.choice(_variant_forms(rng.choice(inflected[other])))])
        # own-class compounds, spaced or zwnj-joined
        for left, right in rng.sample(compounds[label], k=2):
            if rng.random() < 0.5:
                atoms.append([left, right])
            else:
                atoms.append([left + ZWNJ + right])
        # confound halves drift through both classes independently
        for _ in range(3):
            atoms.append([rng.choice(confounds)])
        rng.shuffle(atoms)
        tokens = [t for atom in atoms for t in atom]
        documents.append(Document(id=f"m{i:05d}", raw_text=" ".join(tokens), label=label))
    return Corpus.build(documents, classes=CLASSES)
