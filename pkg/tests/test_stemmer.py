from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import persian_tokens
from sentselect import AffixRule, AffixTable, DataError, stem
from sentselect.corpus import ZWNJ

# (inflected form, expected stem) straight from the shipped affix inventory;
# the doubled-Yeh plural form reduces one letter further because the
# residual trailing Yeh is itself a personal ending
TABLE_WORDS = [
    ("بینم", "بین"),
    ("بینی", "بین"),
    ("ببند", "ببن"),
    ("بینیم", "بین"),
    ("ببینید", "ببین"),
    ("ببینند", "ببین"),
    ("تصویرها", "تصویر"),
    ("دوستان", "دوست"),
    ("نکات", "نک"),
    ("مراجعین", "مراجع"),
    ("مراجعیین", "مراجع"),
]


class TestStem:
    @pytest.mark.parametrize("token,expected", TABLE_WORDS)
    def test_inventory_words(self, token, expected):
        assert stem(token) == expected

    def test_short_token_unchanged(self):
        # residue would drop below every min_stem_length
        assert stem("ها") == "ها"
        assert stem("می") == "می"

    def test_unaffixed_token_unchanged(self):
        assert stem("خوب") == "خوب"
        assert stem("qwerty") == "qwerty"

    def test_joined_prefix_strips(self):
        assert stem("می" + ZWNJ + "بینم") == "بین"
        assert stem("نمی" + ZWNJ + "بینم") == "بین"

    def test_prefix_needs_long_residue(self):
        # residue shorter than 3 blocks the verbal prefix
        assert stem("میز") == "میز"

    def test_empty_token_rejected(self):
        with pytest.raises(ValueError):
            stem("")

    def test_bad_max_passes_rejected(self):
        with pytest.raises(ValueError):
            stem("تصویرها", max_passes=0)

    def test_suffix_first_order_available(self):
        # the configurable legacy ordering runs suffixes before prefixes
        assert stem("تصویرها", prefixes_first=False) == "تصویر"

    @given(persian_tokens)
    @settings(max_examples=300)
    def test_never_longer_never_empty(self, token):
        out = stem(token)
        assert 1 <= len(out) <= len(token)

    @given(persian_tokens)
    @settings(max_examples=300)
    def test_idempotent(self, token):
        once = stem(token)
        assert stem(once) == once

    @given(persian_tokens)
    def test_deterministic(self, token):
        assert stem(token) == stem(token)


class TestAffixTable:
    def test_shipped_table_covers_required_suffixes(self):
        surfaces = {r.surface for r in AffixTable.default().suffixes}
        for required in ("م", "ی", "د", "یم", "ید", "ند", "ها", "ان", "ات", "ین"):
            assert required in surfaces

    def test_min_stem_length_guard(self):
        table = AffixTable.default()
        assert all(r.min_stem_length >= 2 for r in table.suffixes + table.prefixes)

    def test_duplicate_surface_rejected(self):
        with pytest.raises(DataError, match="duplicate"):
            AffixTable(
                suffixes=(AffixRule("ها", 2), AffixRule("ها", 3)),
                prefixes=(),
            )

    def test_low_min_rejected(self):
        with pytest.raises(DataError, match="min_stem_length"):
            AffixTable(suffixes=(AffixRule("ها", 1),), prefixes=())

    def test_order_enforced(self):
        with pytest.raises(DataError, match="longest"):
            AffixTable(
                suffixes=(AffixRule("م", 2), AffixRule("ها", 2)),
                prefixes=(),
            )

    def test_from_rows_sorts(self):
        table = AffixTable.from_rows([
            ("suffix", "م", 2),
            ("suffix", "ها", 2),
            ("prefix", "می", 3),
        ])
        assert table.suffixes[0].surface == "ها"

    def test_load_custom_file(self, tmp_path):
        path = tmp_path / "affixes.tsv"
        path.write_text("suffix\tها\t2\nprefix\tمی\t3\n", encoding="utf-8")
        table = AffixTable.load(str(path))
        assert stem("کتابها", table) == "کتاب"

    def test_unknown_kind_rejected(self, tmp_path):
        path = tmp_path / "affixes.tsv"
        path.write_text("infix\tها\t2\n", encoding="utf-8")
        with pytest.raises(DataError, match="infix"):
            AffixTable.load(str(path))
