"""Sentiment classification toolkit.

Pipeline stages: text normalization, affix-stripping stemming, n-gram
featurization, statistical feature selection (df / tfv / mi / mmi), a
multinomial Naive Bayes classifier, and a stratified cross-validation
harness. See the CLI (``sentselect --help``) for the batch surface.
"""

from .classifier import TrainedModel, classify, load_model, save_model, train
from .config import PipelineConfig
from .corpus import (
    Corpus,
    Document,
    NormalizationDict,
    corpus_to_jsonl,
    load_corpus,
    normalize_text,
)
from .errors import DataError, InvariantError, SentselectError, UsageError
from .evaluation import (
    AggregateMetrics,
    ClassOutcome,
    EvalReport,
    FoldPlan,
    aggregate,
    f_score,
    make_folds,
    metrics,
    run_cv,
)
from .features import (
    Feature,
    FeatureSpace,
    FeaturizedCorpus,
    TextPipeline,
    build_feature_space,
    featurize,
    tokenize,
)
from .selection import (
    ClassTermFrequencies,
    ContingencyCounts,
    FeatureRanking,
    class_term_frequencies,
    count_contingency,
    rank_features,
    ranking_to_tsv,
    score_df,
    score_mi,
    score_mmi,
    score_tfv,
    select_top_k,
)
from .stemmer import AffixRule, AffixTable, stem
from .synth import GeneratorSpec, generate, generate_morph_benchmark

__version__ = "0.1.0"

__all__ = [
    "AffixRule", "AffixTable", "AggregateMetrics", "ClassOutcome",
    "ClassTermFrequencies", "ContingencyCounts", "Corpus", "DataError",
    "Document", "EvalReport", "Feature", "FeatureRanking", "FeatureSpace",
    "FeaturizedCorpus", "FoldPlan", "GeneratorSpec", "InvariantError",
    "NormalizationDict", "PipelineConfig", "SentselectError", "TextPipeline",
    "TrainedModel", "UsageError", "aggregate", "build_feature_space",
    "class_term_frequencies", "classify", "corpus_to_jsonl",
    "count_contingency", "f_score", "featurize", "generate",
    "generate_morph_benchmark", "load_corpus", "load_model", "make_folds",
    "metrics", "normalize_text", "rank_features", "ranking_to_tsv", "run_cv",
    "save_model", "score_df", "score_mi", "score_mmi", "score_tfv",
    "select_top_k", "stem", "tokenize", "train",
]
