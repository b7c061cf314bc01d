"""Feature scoring and top-k selection.

Four measures over per-feature document statistics:

* ``df``: document frequency, the number of training documents containing
  the feature.
* ``tfv``: variance of the feature's per-class term-frequency totals.
* ``mi``: ratio form of the feature/class association, A*N / ((A+B)*(A+C)),
  where A..D are the cells of the per-feature document contingency table.
  Equals 1 under exact independence and grows with positive association.
* ``mmi``: signed association contrasting the concordant cell products
  against the discordant ones, (A*D - C*B) / ((A+C)*(B+D)*(A+B)*(C+D)).
  Zero exactly when A*D == C*B; for two classes the score for one class is
  the exact negation of the score for the other.

Contingency statistics are document-level (a feature counts once per
document); term-level multiplicity feeds only the variance measure. Features
with a degenerate table (present in all documents or none, or an empty
class) score 0 under ``mi``/``mmi`` instead of raising, and are recorded on
the ranking.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .errors import DataError
from .features import FeatureSpace, FeaturizedCorpus

SELECTION_METHODS = ("df", "tfv", "mi", "mmi")
CLASS_AGGREGATIONS = ("max", "mean")


@dataclass(frozen=True)
class ContingencyCounts:
    """Per-(feature, class) document co-occurrence cells.

    For feature f and class c: A documents of c containing f, B documents of
    other classes containing f, C documents of c without f, D the rest.
    A+B+C+D is the corpus size for every pair.
    """

    classes: tuple[str, ...]
    n_docs: int
    class_doc_counts: Mapping[str, int]
    doc_freq: tuple[int, ...]
    class_feature_docs: Mapping[str, tuple[int, ...]]

    @property
    def n_features(self) -> int:
        return len(self.doc_freq)

    def cells(self, feature_id: int, cls: str) -> tuple[int, int, int, int]:
        a = self.class_feature_docs[cls][feature_id]
        b = self.doc_freq[feature_id] - a
        c = self.class_doc_counts[cls] - a
        d = self.n_docs - a - b - c
        return a, b, c, d


@dataclass(frozen=True)
class ClassTermFrequencies:
    """Total occurrences of each feature summed over the documents of each class."""

    classes: tuple[str, ...]
    tf: Mapping[str, tuple[int, ...]]

    @property
    def k(self) -> int:
        return len(self.classes)


def count_contingency(featurized: FeaturizedCorpus, space: FeatureSpace) -> ContingencyCounts:
    """Document-level presence counts for every (feature, class)."""
    if space.size == 0:
        raise DataError("feature space is empty")
    corpus = featurized.corpus
    doc_freq = [0] * space.size
    per_class = {c: [0] * space.size for c in corpus.classes}
    for doc, features in zip(corpus.documents, featurized.doc_features):
        present_ids = {space.id_of(f.surface) for f in features}
        present_ids.discard(None)
        class_row = per_class[doc.label]
        for fid in present_ids:
            doc_freq[fid] += 1
            class_row[fid] += 1
    return ContingencyCounts(
        classes=corpus.classes,
        n_docs=corpus.total,
        class_doc_counts=dict(corpus.class_counts),
        doc_freq=tuple(doc_freq),
        class_feature_docs={c: tuple(row) for c, row in per_class.items()},
    )


def class_term_frequencies(featurized: FeaturizedCorpus, space: FeatureSpace) -> ClassTermFrequencies:
    """Occurrence totals (with multiplicity) per feature per class."""
    corpus = featurized.corpus
    tf = {c: [0] * space.size for c in corpus.classes}
    for doc, features in zip(corpus.documents, featurized.doc_features):
        row = tf[doc.label]
        for surface, count in Counter(f.surface for f in features).items():
            fid = space.id_of(surface)
            if fid is not None:
                row[fid] += count
    return ClassTermFrequencies(
        classes=corpus.classes, tf={c: tuple(row) for c, row in tf.items()}
    )


def score_df(counts: ContingencyCounts, feature_id: int) -> float:
    """Number of documents containing the feature (class-independent)."""
    return float(counts.doc_freq[feature_id])


def score_tfv(tfs: ClassTermFrequencies, feature_id: int) -> float:
    """Sum of squared deviations of per-class term frequencies from their mean."""
    values = [tfs.tf[c][feature_id] for c in tfs.classes]
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values)


def score_mi(counts: ContingencyCounts, feature_id: int, cls: str) -> float:
    """A*N / ((A+B)*(A+C)); 0 when a denominator factor vanishes."""
    a, b, c, _ = counts.cells(feature_id, cls)
    if a + b == 0 or a + c == 0:
        return 0.0
    return a * counts.n_docs / ((a + b) * (a + c))


def score_mmi(counts: ContingencyCounts, feature_id: int, cls: str) -> float:
    """(A*D - C*B) / ((A+C)*(B+D)*(A+B)*(C+D)); 0 on any zero factor."""
    a, b, c, d = counts.cells(feature_id, cls)
    denominator = (a + c) * (b + d) * (a + b) * (c + d)
    if denominator == 0:
        return 0.0
    return (a * d - c * b) / denominator


def _is_degenerate(counts: ContingencyCounts, feature_id: int, cls: str) -> bool:
    a, b, c, d = counts.cells(feature_id, cls)
    return (a + c) * (b + d) * (a + b) * (c + d) == 0


@dataclass(frozen=True)
class FeatureRanking:
    """Scores plus the induced order: descending score, ties by ascending id."""

    method: str
    scores: tuple[float, ...]
    order: tuple[int, ...]
    degenerate: frozenset[int] = frozenset()


def rank_features(
    counts: ContingencyCounts | None,
    tfs: ClassTermFrequencies | None,
    method: str,
    class_aggregation: str = "max",
    *,
    tfv_ascending: bool = False,
) -> FeatureRanking:
    """Score every feature by ``method`` and sort.

    ``mi`` and ``mmi`` are per-class scores; they are reduced to one value
    per feature by ``class_aggregation`` (max by default, the usual
    convention, or mean). ``tfv_ascending`` flips the variance ranking for
    the low-variance reading; scores themselves are unchanged.
    """
    if method not in SELECTION_METHODS:
        raise ValueError(f"unknown selection method {method!r}")
    if class_aggregation not in CLASS_AGGREGATIONS:
        raise ValueError(f"unknown class aggregation {class_aggregation!r}")

    degenerate: set[int] = set()
    if method == "df":
        assert counts is not None
        scores = [score_df(counts, f) for f in range(counts.n_features)]
    elif method == "tfv":
        assert tfs is not None
        n = len(next(iter(tfs.tf.values())))
        scores = [score_tfv(tfs, f) for f in range(n)]
    else:
        assert counts is not None
        scorer = score_mi if method == "mi" else score_mmi
        scores = []
        for f in range(counts.n_features):
            per_class = [scorer(counts, f, c) for c in counts.classes]
            if any(_is_degenerate(counts, f, c) for c in counts.classes):
                degenerate.add(f)
            if class_aggregation == "max":
                scores.append(max(per_class))
            else:
                scores.append(sum(per_class) / len(per_class))

    reverse = method == "tfv" and tfv_ascending
    order = sorted(range(len(scores)), key=lambda f: (scores[f] if reverse else -scores[f], f))
    return FeatureRanking(
        method=method,
        scores=tuple(scores),
        order=tuple(order),
        degenerate=frozenset(degenerate),
    )


def select_top_k(ranking: FeatureRanking, k: int) -> set[int]:
    """The first k feature ids of the ranking order."""
    if not 1 <= k <= len(ranking.order):
        raise ValueError(f"k must be in 1..{len(ranking.order)}, got {k}")
    return set(ranking.order[:k])


def ranking_to_tsv(ranking: FeatureRanking, space: FeatureSpace) -> str:
    """rank, feature id, surface, score (6 decimal places) per line."""
    lines = []
    for rank, fid in enumerate(ranking.order, start=1):
        surface = space.features[fid].surface
        lines.append(f"{rank}\t{fid}\t{surface}\t{ranking.scores[fid]:.6f}\n")
    return "".join(lines)
