"""Batch CLI: prepare, select, train, predict, evaluate, synth.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation. Every output file is written atomically (temp file + rename) and
every run is deterministic given its flags and --seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

from .classifier import classify, load_model, save_model, train
from .config import SELECTOR_CHOICES, PipelineConfig
from .corpus import corpus_to_jsonl, load_corpus
from .errors import DataError, SentselectError, UsageError
from .evaluation import run_cv
from .features import FeatureSpace, FeaturizedCorpus, TextPipeline, build_feature_space
from .selection import (
    SELECTION_METHODS,
    class_term_frequencies,
    count_contingency,
    rank_features,
    ranking_to_tsv,
    select_top_k,
)
from .synth import GeneratorSpec, generate, ground_truth_tsv

PREPARE_CACHE_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_topk(value: str) -> list[int]:
    try:
        ks = [int(p) for p in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid --topk list {value!r}")
    if any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("--topk values must be positive")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise argparse.ArgumentTypeError("--topk sweep must be strictly increasing")
    return ks


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="corpus file")
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zwnj", choices=("join", "space"), default="join",
                   help="pseudo-space policy (default: join)")
    p.add_argument("--stem", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--bigrams", action=argparse.BooleanOptionalAction, default=True)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--agg", choices=("max", "mean"), default="max",
                   help="per-class score aggregation for mi/mmi")
    p.add_argument("--prior", choices=("paper", "standard"), default="paper")
    p.add_argument("--smooth-space", choices=("selected", "full"), default="selected")


def _pipeline(args) -> TextPipeline:
    return TextPipeline(
        zwnj_policy=args.zwnj,
        use_stemming=args.stem,
        use_bigrams=args.bigrams,
    )


def cmd_prepare(args) -> int:
    out = Path(args.out)
    cache_path = out / "prepared.json"
    input_hash = _sha256_file(args.input)
    config = {
        "format": args.format,
        "zwnj_policy": args.zwnj,
        "use_stemming": args.stem,
        "use_bigrams": args.bigrams,
    }
    if cache_path.exists():
        try:
            cached = json.loads(cache_path.read_text("utf-8"))
            if (
                cached.get("version") == PREPARE_CACHE_VERSION
                and cached.get("input_sha256") == input_hash
                and cached.get("config") == config
            ):
                print(f"cache hit: {cache_path}")
                return 0
        except (json.JSONDecodeError, OSError):
            print(f"warning: cache {cache_path} unreadable, regenerating", file=sys.stderr)
    corpus = load_corpus(args.input, args.format, require_labels=False)
    pipeline = _pipeline(args)
    documents = []
    for doc in corpus.documents:
        tokens = pipeline.tokens_for(doc.raw_text)
        features = [[f.order, f.surface] for f in pipeline.features_for(doc.raw_text)]
        documents.append(
            {"id": doc.id, "label": doc.label, "tokens": tokens, "features": features}
        )
    cache = {
        "version": PREPARE_CACHE_VERSION,
        "input_sha256": input_hash,
        "config": config,
        "documents": documents,
    }
    _atomic_write(cache_path, json.dumps(cache, ensure_ascii=False, sort_keys=True, indent=1) + "\n")
    print(f"wrote {cache_path}")
    return 0


def cmd_select(args) -> int:
    corpus = load_corpus(args.input, args.format)
    featurized = FeaturizedCorpus.build(corpus, _pipeline(args))
    space = build_feature_space(featurized)
    counts = count_contingency(featurized, space)
    tfs = class_term_frequencies(featurized, space)
    methods = SELECTION_METHODS if args.selector == "all" else (args.selector,)
    out = Path(args.out)
    for method in methods:
        ranking = rank_features(counts, tfs, method, args.agg)
        path = out / f"ranking_{method}.tsv"
        _atomic_write(path, ranking_to_tsv(ranking, space))
        print(f"wrote {path}")
    return 0


def cmd_train(args) -> int:
    if args.topk is not None and len(args.topk) != 1:
        raise UsageError("train takes a single --topk value, not a sweep")
    corpus = load_corpus(args.input, args.format)
    pipeline = _pipeline(args)
    featurized = FeaturizedCorpus.build(corpus, pipeline)
    space = build_feature_space(featurized)
    if args.selector == "none":
        selected = set(range(space.size))
    else:
        counts = count_contingency(featurized, space)
        tfs = class_term_frequencies(featurized, space)
        ranking = rank_features(counts, tfs, args.selector, args.agg)
        selected = (
            select_top_k(ranking, args.topk[0]) if args.topk else set(ranking.order)
        )
    model = train(featurized, space, selected,
                  prior_mode=args.prior, smoothing_space=args.smooth_space)
    out = Path(args.out)
    space_text = space.serialize()
    _atomic_write(out / "fspace.tsv", space_text)
    meta = {
        "zwnj_policy": args.zwnj,
        "use_stemming": str(args.stem),
        "use_bigrams": str(args.bigrams),
    }
    out.mkdir(parents=True, exist_ok=True)
    save_model(model, str(out / "model.tsv"), fspace_hash=_sha256_text(space_text), pipeline_meta=meta)
    print(f"wrote {out / 'model.tsv'} and {out / 'fspace.tsv'} "
          f"({len(selected)} of {space.size} features)")
    return 0


def cmd_predict(args) -> int:
    model_dir = Path(args.model)
    space_path = model_dir / "fspace.tsv"
    model_path = model_dir / "model.tsv"
    for required in (space_path, model_path):
        if not required.exists():
            raise DataError(f"missing {required}; --model must point at a train output directory")
    space_text = space_path.read_text("utf-8")
    space = FeatureSpace.deserialize(space_text)
    model, stored_hash, meta = load_model(str(model_path), space)
    actual_hash = _sha256_text(space_text)
    if stored_hash != actual_hash:
        raise DataError(
            "feature-space version mismatch: model was trained against "
            f"{stored_hash[:12]}, found {actual_hash[:12]}"
        )
    pipeline = TextPipeline(
        zwnj_policy=meta.get("zwnj_policy", "join"),
        use_stemming=meta.get("use_stemming", "True") == "True",
        use_bigrams=meta.get("use_bigrams", "True") == "True",
    )
    corpus = load_corpus(args.input, args.format, require_labels=False)
    lines = []
    for doc in corpus.documents:
        predicted, scores = classify(model, pipeline.features_for(doc.raw_text))
        score_cols = "\t".join(f"{scores[c]:.6f}" for c in model.classes)
        lines.append(f"{doc.id}\t{predicted}\t{score_cols}\n")
    out_path = Path(args.out) / "predictions.tsv"
    _atomic_write(out_path, "".join(lines))
    print(f"wrote {out_path}")
    return 0


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.input, args.format)
    input_hash = _sha256_file(args.input)
    selectors = SELECTION_METHODS if args.selector == "all" else (args.selector,)
    budgets = args.topk if args.topk is not None else [None]
    out = Path(args.out)
    for selector in selectors:
        for k in budgets:
            config = PipelineConfig(
                zwnj_policy=args.zwnj,
                use_stemming=args.stem,
                use_bigrams=args.bigrams,
                selector=selector,
                class_aggregation=args.agg,
                top_k=k,
                prior_mode=args.prior,
                smoothing_space=args.smooth_space,
                folds=args.folds,
                seed=args.seed,
            )
            report = run_cv(corpus, config, input_hash=input_hash)
            stem_name = f"report_{selector}_{'full' if k is None else k}"
            payload = json.dumps(report.to_json_dict(), ensure_ascii=False,
                                 sort_keys=True, indent=2) + "\n"
            _atomic_write(out / f"{stem_name}.json", payload)
            _atomic_write(out / f"{stem_name}.txt", report.to_text_table())
            agg = report.aggregates()
            print(f"{stem_name}: macro-F {agg.macro_f:.4f} micro-F {agg.micro_f:.4f}")
    return 0


def cmd_synth(args) -> int:
    spec = GeneratorSpec(
        n_docs=args.n_docs,
        class_balance=args.balance,
        vocab_size=args.vocab,
        n_polar_features=args.polar,
        polarity_strength=args.strength,
        doc_length=(args.doc_len_min, args.doc_len_max),
        seed=args.seed,
    )
    corpus, _ = generate(spec)
    out = Path(args.out)
    _atomic_write(out / "corpus.jsonl", corpus_to_jsonl(corpus))
    _atomic_write(out / "ground_truth.tsv", ground_truth_tsv(spec))
    print(f"wrote {out / 'corpus.jsonl'} ({corpus.total} documents) and {out / 'ground_truth.tsv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sentselect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prepare", help="normalize and featurize a corpus into a cache")
    _add_input_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("select", help="rank features and export the ranking")
    _add_input_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--selector", choices=SELECTOR_CHOICES[:-1] + ("all",), default="all",
                   help="scoring method, or all four")
    p.add_argument("--agg", choices=("max", "mean"), default="max")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("train", help="train a model on the full corpus")
    _add_input_flags(p)
    _add_pipeline_flags(p)
    _add_model_flags(p)
    p.add_argument("--selector", choices=SELECTOR_CHOICES, default="mmi")
    p.add_argument("--topk", type=_parse_topk, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label new documents with a trained model")
    _add_input_flags(p)
    p.add_argument("--model", required=True, help="directory produced by train")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="stratified k-fold cross-validation")
    _add_input_flags(p)
    _add_pipeline_flags(p)
    _add_model_flags(p)
    p.add_argument("--selector", choices=SELECTOR_CHOICES + ("all",), default="all")
    p.add_argument("--topk", type=_parse_topk, default=None,
                   help="feature budget, or a strictly increasing sweep n[,n...]")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a seeded synthetic polarity corpus")
    p.add_argument("--n-docs", type=int, default=400)
    p.add_argument("--balance", type=float, default=0.5)
    p.add_argument("--vocab", type=int, default=500)
    p.add_argument("--polar", type=int, default=40)
    p.add_argument("--strength", type=float, default=8.0)
    p.add_argument("--doc-len-min", type=int, default=8)
    p.add_argument("--doc-len-max", type=int, default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SentselectError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - map anything unexpected to exit 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
