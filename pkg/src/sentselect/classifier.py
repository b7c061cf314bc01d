"""Multinomial maximum-a-posteriori Naive Bayes over a selected feature subset.

Training counts feature occurrences per class (restricted to the selected
ids), Laplace-smooths the per-feature likelihoods, and stores everything in
log space. Two prior estimates are available:

* ``paper``: (1 + |R_j|) / (|R| + S), a smoothed form that never vanishes.
  With S > 0 these priors do not sum to 1; that is a documented property of
  the estimate, and the argmax decision is unaffected.
* ``standard``: |R_j| / |R|, the plain class fraction.

S is the smoothing-space size: the number of selected features by default
(``smoothing_space="selected"``, under which the smoothed likelihoods sum to
exactly 1 per class), or the full pre-selection feature-space size
(``smoothing_space="full"``). The same S feeds the paper-mode prior.

Classification sums log-likelihoods over feature occurrences, skipping
anything outside the selected subset, and breaks exact ties by class
declaration order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DataError
from .features import Feature, FeatureSpace, FeaturizedCorpus

PRIOR_MODES = ("paper", "standard")
SMOOTHING_SPACES = ("selected", "full")

MODEL_FORMAT = "sentselect-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class TrainedModel:
    classes: tuple[str, ...]
    prior_mode: str
    smoothing_space: str
    fspace_size: int
    smoothing_size: int
    selected: frozenset[int]
    surface_ids: Mapping[str, int]
    log_prior: Mapping[str, float]
    log_likelihood: Mapping[str, Mapping[int, float]]
    n_j: Mapping[str, int]


def train(
    featurized: FeaturizedCorpus,
    space: FeatureSpace,
    selected: Iterable[int],
    prior_mode: str = "paper",
    smoothing_space: str = "selected",
) -> TrainedModel:
    """Estimate priors and smoothed log-likelihoods from a training corpus."""
    if prior_mode not in PRIOR_MODES:
        raise ValueError(f"unknown prior_mode {prior_mode!r}")
    if smoothing_space not in SMOOTHING_SPACES:
        raise ValueError(f"unknown smoothing_space {smoothing_space!r}")
    selected_ids = frozenset(selected)
    if not selected_ids:
        raise ValueError("selected feature set is empty")
    if any(not 0 <= fid < space.size for fid in selected_ids):
        raise ValueError("selected ids outside the feature space")

    corpus = featurized.corpus
    if prior_mode == "standard":
        for cls in corpus.classes:
            if corpus.class_counts[cls] == 0:
                raise DataError(f"class {cls!r} has no training documents")

    smoothing_size = len(selected_ids) if smoothing_space == "selected" else space.size

    n_ij: dict[str, Counter[int]] = {c: Counter() for c in corpus.classes}
    for doc, features in zip(corpus.documents, featurized.doc_features):
        row = n_ij[doc.label]
        for feature in features:
            fid = space.id_of(feature.surface)
            if fid in selected_ids:
                row[fid] += 1
    n_j = {c: sum(row.values()) for c, row in n_ij.items()}

    log_likelihood = {
        c: {
            fid: math.log((n_ij[c][fid] + 1) / (n_j[c] + smoothing_size))
            for fid in selected_ids
        }
        for c in corpus.classes
    }
    if prior_mode == "paper":
        log_prior = {
            c: math.log((1 + corpus.class_counts[c]) / (corpus.total + smoothing_size))
            for c in corpus.classes
        }
    else:
        log_prior = {
            c: math.log(corpus.class_counts[c] / corpus.total) for c in corpus.classes
        }

    surface_ids = {
        space.features[fid].surface: fid for fid in sorted(selected_ids)
    }
    return TrainedModel(
        classes=corpus.classes,
        prior_mode=prior_mode,
        smoothing_space=smoothing_space,
        fspace_size=space.size,
        smoothing_size=smoothing_size,
        selected=selected_ids,
        surface_ids=surface_ids,
        log_prior=log_prior,
        log_likelihood=log_likelihood,
        n_j=n_j,
    )


def classify(model: TrainedModel, features: Iterable[Feature]) -> tuple[str, dict[str, float]]:
    """Argmax class and the per-class log-scores for one document.

    Feature occurrences outside the selected subset contribute nothing; an
    empty document is decided by the priors alone.
    """
    scores = dict(model.log_prior)
    for feature in features:
        fid = model.surface_ids.get(feature.surface)
        if fid is None:
            continue
        for cls in model.classes:
            scores[cls] += model.log_likelihood[cls][fid]
    best = model.classes[0]
    for cls in model.classes[1:]:
        if scores[cls] > scores[best]:
            best = cls
    return best, scores


def save_model(model: TrainedModel, path: str, *, fspace_hash: str, pipeline_meta: Mapping[str, str] | None = None) -> None:
    """Write the model file; float fields carry 17 significant digits."""
    lines = [f"{MODEL_FORMAT}\t{MODEL_VERSION}\n"]
    lines.append("classes\t" + "\t".join(model.classes) + "\n")
    lines.append(f"prior_mode\t{model.prior_mode}\n")
    lines.append(f"smoothing_space\t{model.smoothing_space}\n")
    lines.append(f"fspace_size\t{model.fspace_size}\n")
    lines.append(f"smoothing_size\t{model.smoothing_size}\n")
    lines.append(f"fspace_hash\t{fspace_hash}\n")
    for key, value in sorted((pipeline_meta or {}).items()):
        lines.append(f"meta\t{key}\t{value}\n")
    for cls in model.classes:
        lines.append(f"nj\t{cls}\t{model.n_j[cls]}\n")
    for cls in model.classes:
        lines.append(f"prior\t{cls}\t{model.log_prior[cls]:.17g}\n")
    for fid in sorted(model.selected):
        for cls in model.classes:
            lines.append(f"lik\t{fid}\t{cls}\t{model.log_likelihood[cls][fid]:.17g}\n")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("".join(lines))


def load_model(path: str, space: FeatureSpace) -> tuple[TrainedModel, str, dict[str, str]]:
    """Read a model file back; returns (model, stored fspace hash, meta).

    The caller is responsible for checking the stored hash against the
    feature space actually loaded.
    """
    with open(path, encoding="utf-8") as f:
        lines = f.read().split("\n")
    header = lines[0].split("\t") if lines else []
    if len(header) != 2 or header[0] != MODEL_FORMAT:
        raise DataError("not a model file", path=path, line=1)
    if int(header[1]) != MODEL_VERSION:
        raise DataError(
            f"unsupported model version {header[1]} (expected {MODEL_VERSION})",
            path=path, line=1,
        )
    classes: tuple[str, ...] = ()
    scalars: dict[str, str] = {}
    meta: dict[str, str] = {}
    n_j: dict[str, int] = {}
    log_prior: dict[str, float] = {}
    likelihood: dict[str, dict[int, float]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        kind = cols[0]
        if kind == "classes":
            classes = tuple(cols[1:])
            likelihood = {c: {} for c in classes}
        elif kind in ("prior_mode", "smoothing_space", "fspace_size", "smoothing_size", "fspace_hash"):
            scalars[kind] = cols[1]
        elif kind == "meta":
            meta[cols[1]] = cols[2]
        elif kind == "nj":
            n_j[cols[1]] = int(cols[2])
        elif kind == "prior":
            log_prior[cols[1]] = float(cols[2])
        elif kind == "lik":
            likelihood[cols[2]][int(cols[1])] = float(cols[3])
        else:
            raise DataError(f"unknown record kind {kind!r}", path=path, line=lineno)
    missing = {"prior_mode", "smoothing_space", "fspace_size", "smoothing_size", "fspace_hash"} - scalars.keys()
    if not classes or missing:
        raise DataError(f"model file incomplete (missing {sorted(missing) or 'classes'})", path=path)
    fspace_size = int(scalars["fspace_size"])
    if fspace_size != space.size:
        raise DataError(
            f"model was trained on a feature space of size {fspace_size}, "
            f"loaded space has {space.size}",
            path=path,
        )
    selected = frozenset(likelihood[classes[0]])
    surface_ids = {space.features[fid].surface: fid for fid in sorted(selected)}
    model = TrainedModel(
        classes=classes,
        prior_mode=scalars["prior_mode"],
        smoothing_space=scalars["smoothing_space"],
        fspace_size=fspace_size,
        smoothing_size=int(scalars["smoothing_size"]),
        selected=selected,
        surface_ids=surface_ids,
        log_prior=log_prior,
        log_likelihood=likelihood,
        n_j=n_j,
    )
    return model, scalars["fspace_hash"], meta
