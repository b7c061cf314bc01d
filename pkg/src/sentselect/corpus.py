"""Labeled review corpora and text normalization.

Reviews arrive as JSON-lines or 3-column TSV files. Normalization unifies
character variants (Arabic Yeh/Kaf/Heh forms, Arabic-Indic digits), applies
one of two pseudo-space policies for the zero-width non-joiner, rewrites
colloquial word forms to their formal equivalents, and collapses whitespace.
All of it is idempotent: normalizing an already-normalized string is a no-op.

A corpus and its normalization dictionary are immutable once loaded and can
be shared freely across threads.
"""

from __future__ import annotations

import functools
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .errors import DataError

ZWNJ = "‌"

_WS_RE = re.compile(r"\s+")

CORPUS_FORMATS = ("jsonl", "tsv")


def _data_text(name: str) -> str:
    return resources.files("sentselect").joinpath("data", name).read_text("utf-8")


def _parse_tsv(text: str, n_cols: int, *, path: str | None = None) -> list[tuple[int, list[str]]]:
    """Split TSV content into (line_number, columns) rows, skipping blanks and # comments."""
    rows = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.rstrip("\n").split("\t")
        if len(cols) != n_cols:
            raise DataError(
                f"expected {n_cols} tab-separated columns, got {len(cols)}",
                path=path, line=lineno,
            )
        rows.append((lineno, cols))
    return rows


@functools.lru_cache(maxsize=None)
def default_charmap() -> Mapping[int, str]:
    """The shipped character-variant table as a str.translate mapping."""
    table: dict[int, str] = {}
    for _, (src, dst) in _parse_tsv(_data_text("charmap.tsv"), 2, path="charmap.tsv"):
        table[ord(src)] = dst
    return table


@dataclass(frozen=True)
class Document:
    """One review: an opaque id, its raw text, and an optional polarity label."""

    id: str
    raw_text: str
    label: str | None = None


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of documents with per-class counts."""

    documents: tuple[Document, ...]
    classes: tuple[str, ...]
    class_counts: Mapping[str, int]

    @property
    def total(self) -> int:
        return len(self.documents)

    @staticmethod
    def build(
        documents: Sequence[Document],
        classes: Sequence[str] | None = None,
        *,
        require_labels: bool = True,
    ) -> "Corpus":
        """Assemble and validate a corpus.

        When ``classes`` is omitted the class set is inferred as the sorted
        distinct labels; passing it explicitly fixes the declaration order
        used for tie-breaking downstream.
        """
        docs = tuple(documents)
        if not docs:
            raise DataError("corpus is empty")
        seen_ids: set[str] = set()
        for doc in docs:
            if doc.id in seen_ids:
                raise DataError(f"duplicate document id {doc.id!r}")
            seen_ids.add(doc.id)
            if not doc.raw_text.strip():
                raise DataError(f"document {doc.id!r} has empty text")
        labels = [d.label for d in docs if d.label is not None]
        if require_labels:
            if len(labels) != len(docs):
                missing = next(d.id for d in docs if d.label is None)
                raise DataError(f"document {missing!r} has no label")
        if classes is None:
            class_tuple = tuple(sorted(set(labels)))
        else:
            class_tuple = tuple(classes)
        if require_labels and len(class_tuple) < 2:
            raise DataError(f"need at least 2 classes, found {len(class_tuple)}")
        counts = Counter(labels)
        for label in counts:
            if label not in class_tuple:
                raise DataError(f"unknown label {label!r}, declared classes are {list(class_tuple)}")
        class_counts = {c: counts.get(c, 0) for c in class_tuple}
        return Corpus(documents=docs, classes=class_tuple, class_counts=class_counts)

    def subset(self, indices: Iterable[int]) -> "Corpus":
        """A new corpus over the selected document positions, same class declaration."""
        docs = tuple(self.documents[i] for i in indices)
        if not docs:
            raise DataError("subset selects no documents")
        counts = Counter(d.label for d in docs if d.label is not None)
        return Corpus(
            documents=docs,
            classes=self.classes,
            class_counts={c: counts.get(c, 0) for c in self.classes},
        )


@dataclass(frozen=True)
class NormalizationDict:
    """Colloquial-to-formal replacements, applied on whole space-separated phrases.

    Keys and values are stored in character-normalized form. Loading rejects
    dictionaries that would break normalization idempotence: identity
    entries, values that the dictionary would rewrite again, and values
    containing another key as a contiguous sub-phrase.
    """

    entries: Mapping[str, str]
    _by_tokens: Mapping[tuple[str, ...], str] = field(repr=False, default_factory=dict)
    _max_key_tokens: int = field(repr=False, default=0)

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, str]], *, path: str | None = None) -> "NormalizationDict":
        charmap = default_charmap()
        entries: dict[str, str] = {}
        for raw_key, raw_value in pairs:
            key = _WS_RE.sub(" ", raw_key.translate(charmap)).strip()
            value = _WS_RE.sub(" ", raw_value.translate(charmap)).strip()
            if not key or not value:
                raise DataError("empty colloquial entry", path=path)
            if key == value:
                raise DataError(f"entry maps {key!r} to itself", path=path)
            if key in entries and entries[key] != value:
                raise DataError(f"conflicting entries for {key!r}", path=path)
            entries[key] = value
        by_tokens = {tuple(k.split(" ")): v for k, v in entries.items()}
        max_len = max((len(k) for k in by_tokens), default=0)
        dict_ = NormalizationDict(entries=entries, _by_tokens=by_tokens, _max_key_tokens=max_len)
        dict_._validate_idempotent(path)
        return dict_

    @staticmethod
    def load(path: str) -> "NormalizationDict":
        with open(path, encoding="utf-8") as f:
            text = f.read()
        rows = _parse_tsv(text, 2, path=path)
        return NormalizationDict.from_pairs(((k, v) for _, (k, v) in rows), path=path)

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def default() -> "NormalizationDict":
        rows = _parse_tsv(_data_text("colloquial.tsv"), 2, path="colloquial.tsv")
        return NormalizationDict.from_pairs(((k, v) for _, (k, v) in rows))

    def _validate_idempotent(self, path: str | None) -> None:
        for key, value in self.entries.items():
            value_tokens = value.split(" ")
            if self.apply(value_tokens) != value_tokens:
                raise DataError(
                    f"value {value!r} of entry {key!r} is itself rewritten; "
                    "normalization would not be idempotent",
                    path=path,
                )
            # no contiguous sub-phrase of a value may be a key
            for i in range(len(value_tokens)):
                for j in range(i + 1, len(value_tokens) + 1):
                    if tuple(value_tokens[i:j]) in self._by_tokens:
                        raise DataError(
                            f"value {value!r} contains key {' '.join(value_tokens[i:j])!r}",
                            path=path,
                        )

    def apply(self, tokens: Sequence[str]) -> list[str]:
        """Greedy longest-phrase replacement over a token sequence."""
        if not self._by_tokens:
            return list(tokens)
        out: list[str] = []
        i = 0
        n = len(tokens)
        while i < n:
            replaced = False
            for width in range(min(self._max_key_tokens, n - i), 0, -1):
                candidate = tuple(tokens[i:i + width])
                value = self._by_tokens.get(candidate)
                if value is not None:
                    out.extend(value.split(" "))
                    i += width
                    replaced = True
                    break
            if not replaced:
                out.append(tokens[i])
                i += 1
        return out


def normalize_text(
    raw: str,
    colloquial: NormalizationDict | None = None,
    zwnj_policy: str = "join",
    charmap: Mapping[int, str] | None = None,
) -> str:
    """Normalize raw review text.

    Character variants are unified first, then the pseudo-space policy is
    applied: ``join`` keeps U+200C as an intra-word joiner so joined
    compounds stay one token, ``space`` turns it into an ordinary space.
    Whitespace is collapsed to single spaces and colloquial phrases are
    replaced by their formal forms.
    """
    if zwnj_policy not in ("join", "space"):
        raise ValueError(f"unknown zwnj_policy {zwnj_policy!r}")
    text = raw.translate(default_charmap() if charmap is None else charmap)
    if zwnj_policy == "space":
        text = text.replace(ZWNJ, " ")
    text = _WS_RE.sub(" ", text).strip()
    if colloquial is not None and text:
        text = " ".join(colloquial.apply(text.split(" ")))
    return text


def _document_from_json(line: str, lineno: int, path: str) -> Document:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON ({exc.msg})", path=path, line=lineno) from exc
    if not isinstance(record, dict):
        raise DataError("record is not a JSON object", path=path, line=lineno)
    if "id" not in record or "text" not in record:
        raise DataError("record needs 'id' and 'text' fields", path=path, line=lineno)
    label = record.get("label")
    if label is not None and not isinstance(label, str):
        raise DataError("'label' must be a string", path=path, line=lineno)
    return Document(id=str(record["id"]), raw_text=str(record["text"]), label=label)


def load_corpus(
    path: str,
    format: str = "jsonl",
    *,
    classes: Sequence[str] | None = None,
    require_labels: bool = True,
) -> Corpus:
    """Read a corpus file.

    ``jsonl`` lines are objects with ``id``, ``text`` and (in train mode)
    ``label``; ``tsv`` rows are ``id<TAB>label<TAB>text`` with an empty label
    column allowed in predict mode. Malformed records raise ``DataError``
    with the offending line number.
    """
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format {format!r}")
    with open(path, encoding="utf-8") as f:
        text = f.read()
    documents: list[Document] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        if format == "jsonl":
            documents.append(_document_from_json(line, lineno, path))
        else:
            cols = line.split("\t")
            if len(cols) != 3:
                raise DataError(
                    f"expected 3 tab-separated columns, got {len(cols)}",
                    path=path, line=lineno,
                )
            doc_id, label, doc_text = cols
            documents.append(Document(id=doc_id, raw_text=doc_text, label=label or None))
    if not documents:
        raise DataError("file contains no records", path=path)
    try:
        return Corpus.build(documents, classes=classes, require_labels=require_labels)
    except DataError as exc:
        raise DataError(f"{exc}", path=path) from exc


def corpus_to_jsonl(corpus: Corpus) -> str:
    """Canonical JSON-lines serialization; identical corpora serialize identically."""
    lines = []
    for doc in corpus.documents:
        record = {"id": doc.id, "text": doc.raw_text}
        if doc.label is not None:
            record["label"] = doc.label
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + "\n"
