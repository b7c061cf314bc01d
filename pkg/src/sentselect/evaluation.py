"""Stratified k-fold cross-validation and classification metrics.

Folds come from a seeded within-class shuffle followed by a single
round-robin pointer that runs across classes, so both the overall fold
sizes and the per-class fold counts differ by at most one. Each fold's
feature space, statistics, selection, and model are built from the other
folds only; the held-out documents contribute nothing to training.

Precision, recall and F are computed from per-class TP/FP/FN/TN counts with
the 0/0-scoring-0 convention (counted and reported). Per-class F across
folds is reported both ways: the mean of per-fold F-scores, and F applied
to the fold-averaged precision and recall. Macro averages are unweighted
means across classes; micro averages pool the counts first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .classifier import classify, train
from .config import PipelineConfig
from .corpus import Corpus
from .errors import DataError, InvariantError, SentselectError
from .features import FeaturizedCorpus, TextPipeline, build_feature_space
from .selection import (
    class_term_frequencies,
    count_contingency,
    rank_features,
    select_top_k,
)


@dataclass(frozen=True)
class FoldPlan:
    """A disjoint, exhaustive, class-balanced assignment of documents to folds."""

    k: int
    seed: int
    assignments: Mapping[str, int]

    def fold_of(self, doc_id: str) -> int:
        return self.assignments[doc_id]


def make_folds(corpus: Corpus, k: int, seed: int) -> FoldPlan:
    """Stratified fold assignment, deterministic in (corpus order, k, seed)."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    for cls, count in corpus.class_counts.items():
        if count < k:
            raise DataError(f"class {cls!r} has {count} documents, fewer than k={k}")
    rng = random.Random(seed)
    assignments: dict[str, int] = {}
    pointer = 0
    for cls in corpus.classes:
        ids = [d.id for d in corpus.documents if d.label == cls]
        rng.shuffle(ids)
        for doc_id in ids:
            assignments[doc_id] = pointer % k
            pointer += 1
    if len(assignments) != corpus.total:
        raise InvariantError("fold plan does not cover the corpus")
    return FoldPlan(k=k, seed=seed, assignments=assignments)


@dataclass(frozen=True)
class ClassOutcome:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ClassOutcome") -> "ClassOutcome":
        return ClassOutcome(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tn=self.tn + other.tn,
        )


def f_score(precision: float, recall: float) -> float:
    """Harmonic combination 2PR/(P+R); 0 when both rates are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def metrics(outcome: ClassOutcome) -> tuple[float, float, float]:
    """(precision, recall, f); any 0/0 scores 0 by convention."""
    precision = outcome.tp / (outcome.tp + outcome.fp) if outcome.tp + outcome.fp else 0.0
    recall = outcome.tp / (outcome.tp + outcome.fn) if outcome.tp + outcome.fn else 0.0
    return precision, recall, f_score(precision, recall)


@dataclass(frozen=True)
class AggregateMetrics:
    macro_precision: float
    macro_recall: float
    macro_f: float
    micro_precision: float
    micro_recall: float
    micro_f: float


def aggregate(outcomes: Sequence[ClassOutcome]) -> AggregateMetrics:
    """Macro (unweighted mean of per-group metrics) and micro (pooled counts)."""
    if not outcomes:
        raise ValueError("nothing to aggregate")
    per_group = [metrics(o) for o in outcomes]
    n = len(per_group)
    macro_p = sum(m[0] for m in per_group) / n
    macro_r = sum(m[1] for m in per_group) / n
    macro_f = sum(m[2] for m in per_group) / n
    pooled = ClassOutcome()
    for outcome in outcomes:
        pooled = pooled + outcome
    micro_p, micro_r, micro_f = metrics(pooled)
    return AggregateMetrics(
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f=macro_f,
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f=micro_f,
    )


@dataclass(frozen=True)
class FoldResult:
    fold: int
    outcomes: Mapping[str, ClassOutcome]
    precision: Mapping[str, float]
    recall: Mapping[str, float]
    f: Mapping[str, float]
    space_size: int
    selected_size: int


@dataclass(frozen=True)
class EvalReport:
    config: dict
    classes: tuple[str, ...]
    fold_results: tuple[FoldResult, ...]
    zero_division_events: int
    input_hash: str | None = None

    def pooled_outcome(self, cls: str) -> ClassOutcome:
        pooled = ClassOutcome()
        for fr in self.fold_results:
            pooled = pooled + fr.outcomes[cls]
        return pooled

    def per_class_summary(self) -> dict[str, dict[str, float]]:
        """Fold-averaged P/R/F per class, F both ways, plus pooled counts."""
        summary: dict[str, dict[str, float]] = {}
        k = len(self.fold_results)
        for cls in self.classes:
            mean_p = sum(fr.precision[cls] for fr in self.fold_results) / k
            mean_r = sum(fr.recall[cls] for fr in self.fold_results) / k
            mean_f = sum(fr.f[cls] for fr in self.fold_results) / k
            pooled = self.pooled_outcome(cls)
            pooled_p, pooled_r, pooled_f = metrics(pooled)
            summary[cls] = {
                "precision_mean": mean_p,
                "recall_mean": mean_r,
                "f_mean": mean_f,
                "f_of_means": f_score(mean_p, mean_r),
                "pooled_tp": pooled.tp,
                "pooled_fp": pooled.fp,
                "pooled_fn": pooled.fn,
                "pooled_tn": pooled.tn,
                "pooled_precision": pooled_p,
                "pooled_recall": pooled_r,
                "pooled_f": pooled_f,
            }
        return summary

    def aggregates(self) -> AggregateMetrics:
        return aggregate([self.pooled_outcome(c) for c in self.classes])

    def to_json_dict(self) -> dict:
        """Machine-readable structure with metric reals rounded to 4 decimals."""
        agg = self.aggregates()
        folds = []
        for fr in self.fold_results:
            folds.append({
                "fold": fr.fold,
                "space_size": fr.space_size,
                "selected_size": fr.selected_size,
                "classes": {
                    cls: {
                        "tp": fr.outcomes[cls].tp,
                        "fp": fr.outcomes[cls].fp,
                        "fn": fr.outcomes[cls].fn,
                        "tn": fr.outcomes[cls].tn,
                        "precision": round(fr.precision[cls], 4),
                        "recall": round(fr.recall[cls], 4),
                        "f_score": round(fr.f[cls], 4),
                    }
                    for cls in self.classes
                },
            })
        per_class = {
            cls: {
                key: (round(value, 4) if isinstance(value, float) else value)
                for key, value in summary.items()
            }
            for cls, summary in self.per_class_summary().items()
        }
        return {
            "report_version": 1,
            "config": self.config,
            "input_hash": self.input_hash,
            "zero_division_events": self.zero_division_events,
            "folds": folds,
            "per_class": per_class,
            "aggregates": {
                "macro_precision": round(agg.macro_precision, 4),
                "macro_recall": round(agg.macro_recall, 4),
                "macro_f": round(agg.macro_f, 4),
                "micro_precision": round(agg.micro_precision, 4),
                "micro_recall": round(agg.micro_recall, 4),
                "micro_f": round(agg.micro_f, 4),
            },
        }

    def to_text_table(self) -> str:
        """Aligned table of fold-averaged per-class metrics.

        The F-score column is the mean of per-fold F; the alternative
        F(mean P, mean R) reading is printed alongside.
        """
        approach = self.config.get("selector", "?")
        header = f"{'Approach':<10} {'Class':<12} {'Precision':>9} {'Recall':>9} {'F-score':>9} {'F(avgP,avgR)':>13}"
        lines = [header, "-" * len(header)]
        summary = self.per_class_summary()
        for cls in self.classes:
            s = summary[cls]
            lines.append(
                f"{approach:<10} {cls:<12} {s['precision_mean']:>9.4f} "
                f"{s['recall_mean']:>9.4f} {s['f_mean']:>9.4f} {s['f_of_means']:>13.4f}"
            )
        agg = self.aggregates()
        lines.append("-" * len(header))
        lines.append(
            f"{'macro':<10} {'(classes)':<12} {agg.macro_precision:>9.4f} "
            f"{agg.macro_recall:>9.4f} {agg.macro_f:>9.4f} {'':>13}"
        )
        lines.append(
            f"{'micro':<10} {'(pooled)':<12} {agg.micro_precision:>9.4f} "
            f"{agg.micro_recall:>9.4f} {agg.micro_f:>9.4f} {'':>13}"
        )
        return "\n".join(lines) + "\n"


def _outcomes_from_predictions(
    classes: Sequence[str], pairs: Sequence[tuple[str, str]]
) -> dict[str, ClassOutcome]:
    outcomes = {}
    for cls in classes:
        tp = sum(1 for true, pred in pairs if true == cls and pred == cls)
        fp = sum(1 for true, pred in pairs if true != cls and pred == cls)
        fn = sum(1 for true, pred in pairs if true == cls and pred != cls)
        tn = len(pairs) - tp - fp - fn
        outcomes[cls] = ClassOutcome(tp=tp, fp=fp, fn=fn, tn=tn)
    return outcomes


def run_cv(
    corpus: Corpus,
    config: PipelineConfig,
    pipeline: TextPipeline | None = None,
    input_hash: str | None = None,
) -> EvalReport:
    """Cross-validate the full pipeline on a labeled corpus."""
    if pipeline is None:
        pipeline = TextPipeline(
            zwnj_policy=config.zwnj_policy,
            use_stemming=config.use_stemming,
            use_bigrams=config.use_bigrams,
        )
    featurized = FeaturizedCorpus.build(corpus, pipeline)
    plan = make_folds(corpus, config.folds, config.seed)

    fold_results = []
    zero_division_events = 0
    for fold in range(config.folds):
        try:
            train_idx = [
                i for i, d in enumerate(corpus.documents) if plan.fold_of(d.id) != fold
            ]
            test_idx = [
                i for i, d in enumerate(corpus.documents) if plan.fold_of(d.id) == fold
            ]
            train_fc = featurized.subset(train_idx)
            space = build_feature_space(train_fc)
            if config.selector == "none":
                selected: set[int] = set(range(space.size))
            else:
                counts = count_contingency(train_fc, space)
                tfs = class_term_frequencies(train_fc, space)
                ranking = rank_features(
                    counts, tfs, config.selector, config.class_aggregation
                )
                if config.top_k is None:
                    selected = set(ranking.order)
                else:
                    selected = select_top_k(ranking, config.top_k)
            model = train(
                train_fc, space, selected,
                prior_mode=config.prior_mode,
                smoothing_space=config.smoothing_space,
            )
            pairs = []
            for i in test_idx:
                predicted, _ = classify(model, featurized.doc_features[i])
                pairs.append((corpus.documents[i].label, predicted))
            outcomes = _outcomes_from_predictions(corpus.classes, pairs)
        except SentselectError as exc:
            raise type(exc)(f"fold {fold}: {exc}") from exc
        except ValueError as exc:
            raise ValueError(f"fold {fold}: {exc}") from exc

        precision, recall, f = {}, {}, {}
        for cls in corpus.classes:
            p, r, fv = metrics(outcomes[cls])
            outcome = outcomes[cls]
            if outcome.tp + outcome.fp == 0 or outcome.tp + outcome.fn == 0:
                zero_division_events += 1
            precision[cls], recall[cls], f[cls] = p, r, fv
        fold_results.append(
            FoldResult(
                fold=fold,
                outcomes=outcomes,
                precision=precision,
                recall=recall,
                f=f,
                space_size=space.size,
                selected_size=len(selected),
            )
        )
    return EvalReport(
        config=config.as_dict(),
        classes=corpus.classes,
        fold_results=tuple(fold_results),
        zero_division_events=zero_division_events,
        input_hash=input_hash,
    )
