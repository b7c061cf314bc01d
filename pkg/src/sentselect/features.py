"""Turning normalized text into the n-gram feature stream.

Features are unigrams plus (optionally) adjacent-pair bigrams over the
token sequence, computed after optional stemming. Bigram surfaces embed a
reserved joiner codepoint so they can never collide with a real unigram.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .corpus import Corpus, Document, NormalizationDict, normalize_text
from .errors import DataError
from .stemmer import AffixTable, stem

# U+241F (symbol for unit separator): reserved bigram joiner, never produced
# by tokenization of real text.
BIGRAM_JOINER = "␟"


@dataclass(frozen=True)
class Feature:
    """A unigram (order 1) or bigram (order 2) surface string."""

    surface: str
    order: int

    def __post_init__(self) -> None:
        joiners = self.surface.count(BIGRAM_JOINER)
        if self.order == 1 and joiners != 0:
            raise ValueError(f"unigram surface contains the reserved joiner: {self.surface!r}")
        if self.order == 2 and joiners != 1:
            raise ValueError(f"bigram surface needs exactly one joiner: {self.surface!r}")
        if self.order not in (1, 2):
            raise ValueError(f"feature order must be 1 or 2, got {self.order}")


def _strippable(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat.startswith("P") or cat == "Cf"


def tokenize(text: str) -> list[str]:
    """Split normalized text on whitespace, trimming punctuation off token edges.

    Interior punctuation and intra-word joiners survive; tokens that are all
    punctuation disappear.
    """
    tokens = []
    for chunk in text.split():
        start, end = 0, len(chunk)
        while start < end and _strippable(chunk[start]):
            start += 1
        while end > start and _strippable(chunk[end - 1]):
            end -= 1
        if end > start:
            tokens.append(chunk[start:end])
    return tokens


def featurize(
    tokens: Sequence[str],
    use_bigrams: bool = True,
    stem_fn: Callable[[str], str] | None = None,
) -> list[Feature]:
    """Emit the feature multiset for one document, multiplicity preserved.

    Stemming, when enabled, applies before bigram formation so pairs are
    built over stemmed tokens.
    """
    if stem_fn is not None:
        tokens = [stem_fn(t) for t in tokens]
    features = [Feature(t, 1) for t in tokens]
    if use_bigrams:
        features.extend(
            Feature(a + BIGRAM_JOINER + b, 2) for a, b in zip(tokens, tokens[1:])
        )
    return features


@dataclass(frozen=True)
class FeatureSpace:
    """Ordered set of distinct features; ids are first-occurrence ordinals."""

    features: tuple[Feature, ...]
    _ids: Mapping[str, int] = field(repr=False, default_factory=dict)

    @staticmethod
    def from_features(features: Iterable[Feature]) -> "FeatureSpace":
        ordered: list[Feature] = []
        ids: dict[str, int] = {}
        for feature in features:
            if feature.surface not in ids:
                ids[feature.surface] = len(ordered)
                ordered.append(feature)
        return FeatureSpace(features=tuple(ordered), _ids=ids)

    @property
    def size(self) -> int:
        return len(self.features)

    def id_of(self, surface: str) -> int | None:
        return self._ids.get(surface)

    def __contains__(self, surface: str) -> bool:
        return surface in self._ids

    def serialize(self) -> str:
        return "".join(
            f"{i}\t{f.order}\t{f.surface}\n" for i, f in enumerate(self.features)
        )

    @staticmethod
    def deserialize(text: str) -> "FeatureSpace":
        features: list[Feature] = []
        for lineno, line in enumerate(text.split("\n"), start=1):
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise DataError("expected id<TAB>order<TAB>surface", line=lineno)
            fid, order, surface = cols
            if int(fid) != len(features):
                raise DataError(f"non-contiguous feature id {fid}", line=lineno)
            features.append(Feature(surface, int(order)))
        return FeatureSpace.from_features(features)


@dataclass(frozen=True)
class TextPipeline:
    """Document-to-features transform: normalize, tokenize, stem, featurize.

    Pure per-document; holds no corpus statistics, so the same pipeline can
    featurize training and held-out documents without leakage.
    """

    zwnj_policy: str = "join"
    use_stemming: bool = True
    use_bigrams: bool = True
    colloquial: NormalizationDict = field(default_factory=NormalizationDict.default)
    affixes: AffixTable = field(default_factory=AffixTable.default)

    def tokens_for(self, raw_text: str) -> list[str]:
        return tokenize(normalize_text(raw_text, self.colloquial, self.zwnj_policy))

    def features_for(self, raw_text: str) -> list[Feature]:
        stem_fn = (lambda t: stem(t, self.affixes)) if self.use_stemming else None
        return featurize(self.tokens_for(raw_text), self.use_bigrams, stem_fn)


@dataclass(frozen=True)
class FeaturizedCorpus:
    """A corpus together with each document's feature multiset."""

    corpus: Corpus
    doc_features: tuple[tuple[Feature, ...], ...]

    @staticmethod
    def build(corpus: Corpus, pipeline: TextPipeline) -> "FeaturizedCorpus":
        return FeaturizedCorpus(
            corpus=corpus,
            doc_features=tuple(
                tuple(pipeline.features_for(d.raw_text)) for d in corpus.documents
            ),
        )

    @property
    def documents(self) -> tuple[Document, ...]:
        return self.corpus.documents

    def subset(self, indices: Sequence[int]) -> "FeaturizedCorpus":
        return FeaturizedCorpus(
            corpus=self.corpus.subset(indices),
            doc_features=tuple(self.doc_features[i] for i in indices),
        )


def build_feature_space(featurized: FeaturizedCorpus) -> FeatureSpace:
    """Enumerate every distinct feature of the corpus in first-occurrence order."""
    if not featurized.documents:
        raise DataError("cannot build a feature space from an empty corpus")
    return FeatureSpace.from_features(
        f for doc in featurized.doc_features for f in doc
    )
