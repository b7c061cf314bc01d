"""Affix-stripping stemmer for Persian tokens.

Reduces an inflected token toward its base form by removing suffixes and
prefixes from a data-driven table. Each round exhausts suffixes first
(longest surface wins), then prefixes; a rule only fires when the residue
keeps at least its ``min_stem_length`` characters. Because every strip
shortens the token and the length guards only get harder to satisfy, a
single round already reaches a fixpoint, which makes stemming idempotent.

The shipped table covers the personal verb endings and plural markers plus
a small extension (comparatives, plural-ezafe forms, and the verbal
prefixes with or without a zero-width non-joiner). The extension goes
beyond the bare present-tense/plural inventory; edit ``data/affixes.tsv``
to tune it without touching code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from .errors import DataError


@dataclass(frozen=True)
class AffixRule:
    surface: str
    min_stem_length: int


@dataclass(frozen=True)
class AffixTable:
    """Suffix and prefix rules, each kind ordered longest-surface-first."""

    suffixes: tuple[AffixRule, ...]
    prefixes: tuple[AffixRule, ...]

    def __post_init__(self) -> None:
        for kind, rules in (("suffix", self.suffixes), ("prefix", self.prefixes)):
            surfaces = [r.surface for r in rules]
            if len(surfaces) != len(set(surfaces)):
                raise DataError(f"duplicate {kind} surfaces in affix table")
            for rule in rules:
                if not rule.surface:
                    raise DataError(f"empty {kind} surface")
                if rule.min_stem_length < 2:
                    raise DataError(
                        f"{kind} {rule.surface!r}: min_stem_length must be >= 2"
                    )
            lengths = [len(r.surface) for r in rules]
            if lengths != sorted(lengths, reverse=True):
                raise DataError(f"{kind} rules must be ordered longest-surface-first")

    @staticmethod
    def from_rows(rows: list[tuple[str, str, int]], *, path: str | None = None) -> "AffixTable":
        suffixes: list[AffixRule] = []
        prefixes: list[AffixRule] = []
        for kind, surface, min_len in rows:
            if kind == "suffix":
                suffixes.append(AffixRule(surface, min_len))
            elif kind == "prefix":
                prefixes.append(AffixRule(surface, min_len))
            else:
                raise DataError(f"unknown affix kind {kind!r}", path=path)
        order = lambda r: (-len(r.surface), r.surface)
        return AffixTable(
            suffixes=tuple(sorted(suffixes, key=order)),
            prefixes=tuple(sorted(prefixes, key=order)),
        )

    @staticmethod
    def load(path: str) -> "AffixTable":
        from .corpus import _parse_tsv

        with open(path, encoding="utf-8") as f:
            rows = _parse_tsv(f.read(), 3, path=path)
        return AffixTable.from_rows(
            [(kind, surface, _parse_min_len(min_len, path, lineno))
             for lineno, (kind, surface, min_len) in rows],
            path=path,
        )

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def default() -> "AffixTable":
        from .corpus import _parse_tsv

        text = resources.files("sentselect").joinpath("data", "affixes.tsv").read_text("utf-8")
        rows = _parse_tsv(text, 3, path="affixes.tsv")
        return AffixTable.from_rows(
            [(kind, surface, _parse_min_len(min_len, "affixes.tsv", lineno))
             for lineno, (kind, surface, min_len) in rows],
        )


def _parse_min_len(value: str, path: str | None, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise DataError(f"min_stem_length {value!r} is not an integer", path=path, line=lineno)


def _strip_exhaustively(token: str, rules: tuple[AffixRule, ...], at_end: bool) -> str:
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if len(token) - len(rule.surface) < rule.min_stem_length:
                continue
            if at_end:
                if token.endswith(rule.surface):
                    token = token[: -len(rule.surface)]
                    changed = True
                    break
            elif token.startswith(rule.surface):
                token = token[len(rule.surface):]
                changed = True
                break
    return token


def stem(
    token: str,
    table: AffixTable | None = None,
    max_passes: int = 3,
    *,
    prefixes_first: bool = True,
) -> str:
    """Strip affixes from ``token``; returns it unchanged when nothing matches.

    Prefixes go first by default: stripping suffixes off a prefixed verb
    first would count the prefix toward the length guard and eat stem
    material (the joined present-tense forms are the failure case). The
    result is never empty and never longer than the input.
    """
    if not token:
        raise ValueError("cannot stem an empty token")
    if max_passes < 1:
        raise ValueError("max_passes must be >= 1")
    if table is None:
        table = AffixTable.default()
    for _ in range(max_passes):
        before = token
        if prefixes_first:
            token = _strip_exhaustively(token, table.prefixes, at_end=False)
            token = _strip_exhaustively(token, table.suffixes, at_end=True)
        else:
            token = _strip_exhaustively(token, table.suffixes, at_end=True)
            token = _strip_exhaustively(token, table.prefixes, at_end=False)
        if token == before:
            break
    return token
