from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sentselect import (
    Corpus,
    DataError,
    Document,
    NormalizationDict,
    corpus_to_jsonl,
    load_corpus,
    normalize_text,
    tokenize,
)
from sentselect.corpus import ZWNJ, default_charmap


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")


class TestLoadCorpus:
    def test_counts_two_plus_two(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            {"id": "a", "text": "x", "label": "positive"},
            {"id": "b", "text": "y", "label": "positive"},
            {"id": "c", "text": "z", "label": "negative"},
            {"id": "d", "text": "w", "label": "negative"},
        ])
        corpus = load_corpus(str(path))
        assert corpus.total == 4
        assert corpus.class_counts == {"negative": 2, "positive": 2}

    def test_missing_label_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            {"id": "a", "text": "x", "label": "positive"},
            {"id": "b", "text": "y"},
            {"id": "c", "text": "z", "label": "negative"},
        ])
        with pytest.raises(DataError, match="'b'"):
            load_corpus(str(path))

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "x", "label": "p"}\n{oops\n', encoding="utf-8")
        with pytest.raises(DataError, match=":2:"):
            load_corpus(str(path))

    def test_unknown_label_named(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            {"id": "a", "text": "x", "label": "meh"},
            {"id": "b", "text": "y", "label": "positive"},
        ])
        with pytest.raises(DataError, match="meh"):
            load_corpus(str(path), classes=("negative", "positive"))

    def test_empty_file_errors(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(DataError, match="no records"):
            load_corpus(str(path))

    def test_tsv_roundtrip(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\tpositive\tgood stuff\nb\tnegative\tbad stuff\n", encoding="utf-8")
        corpus = load_corpus(str(path), "tsv")
        assert corpus.documents[0].raw_text == "good stuff"
        assert corpus.classes == ("negative", "positive")

    def test_tsv_empty_label_predict_mode(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\t\tsome text\n", encoding="utf-8")
        corpus = load_corpus(str(path), "tsv", require_labels=False)
        assert corpus.documents[0].label is None

    def test_duplicate_id_rejected(self):
        with pytest.raises(DataError, match="duplicate"):
            Corpus.build([
                Document("a", "x", "positive"),
                Document("a", "y", "negative"),
            ])

    def test_paper_dataset_shape(self, tmp_path):
        path = tmp_path / "big.jsonl"
        write_jsonl(path, [
            {"id": f"r{i}", "text": f"token{i}",
             "label": "positive" if i < 511 else "negative"}
            for i in range(1020)
        ])
        corpus = load_corpus(str(path))
        assert corpus.total == 1020
        assert corpus.class_counts == {"negative": 509, "positive": 511}

    def test_loading_is_deterministic(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            {"id": "a", "text": "x y", "label": "positive"},
            {"id": "b", "text": "z", "label": "negative"},
        ])
        first = corpus_to_jsonl(load_corpus(str(path)))
        second = corpus_to_jsonl(load_corpus(str(path)))
        assert first.encode() == second.encode()

    def test_class_counts_sum_to_total(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            {"id": f"d{i}", "text": "x", "label": "positive" if i % 3 else "negative"}
            for i in range(17)
        ])
        corpus = load_corpus(str(path))
        assert sum(corpus.class_counts.values()) == corpus.total == 17


class TestNormalize:
    def test_colloquial_row(self):
        assert normalize_text("ازش", NormalizationDict.default()) == "از آن"

    def test_all_shipped_rows(self):
        dictionary = NormalizationDict.default()
        for key, value in dictionary.entries.items():
            assert normalize_text(key, dictionary) == value

    def test_no_hits_collapses_whitespace_only(self):
        raw = "سلام   دنیا\tچطوری"
        assert normalize_text(raw, NormalizationDict.default()) == "سلام دنیا چطوری"

    def test_pseudo_space_policies(self):
        compound = "دست" + ZWNJ + "خط"
        joined = normalize_text(compound, zwnj_policy="join")
        spaced = normalize_text(compound, zwnj_policy="space")
        assert len(tokenize(joined)) == 1
        assert len(tokenize(spaced)) == 2

    def test_character_variants_folded(self):
        # Arabic Yeh and Kaf become the Persian codepoints
        assert normalize_text("يك") == "یک"
        # Arabic-Indic digits become Persian digits
        assert normalize_text("٠٩") == "۰۹"

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            normalize_text("x", zwnj_policy="strip")

    def test_charmap_image_disjoint_from_keys(self):
        charmap = default_charmap()
        for target in charmap.values():
            assert ord(target) not in charmap

    # alphabet mixes plain letters, shipped dict keys, Arabic variants,
    # the joiner, and whitespace to stress every normalization stage
    STRESS_ALPHABET = "ابپتثدیە ازش خونه نداره كيى" + ZWNJ + " \t٠"

    @given(st.text(alphabet=STRESS_ALPHABET, max_size=40),
           st.sampled_from(["join", "space"]))
    @settings(max_examples=200)
    def test_idempotent(self, raw, policy):
        dictionary = NormalizationDict.default()
        once = normalize_text(raw, dictionary, policy)
        twice = normalize_text(once, dictionary, policy)
        assert once == twice

    @given(st.text(max_size=30), st.sampled_from(["join", "space"]))
    @settings(max_examples=200)
    def test_idempotent_arbitrary_unicode(self, raw, policy):
        once = normalize_text(raw, NormalizationDict.default(), policy)
        assert normalize_text(once, NormalizationDict.default(), policy) == once


class TestNormalizationDict:
    def test_identity_entry_rejected(self):
        with pytest.raises(DataError, match="itself"):
            NormalizationDict.from_pairs([("خوب", "خوب")])

    def test_rewritten_value_rejected(self):
        # value contains a key, so a second application would change it
        with pytest.raises(DataError):
            NormalizationDict.from_pairs([("ازش", "از آن"), ("آن", "این")])

    def test_chained_entries_rejected(self):
        with pytest.raises(DataError):
            NormalizationDict.from_pairs([("الف", "ب"), ("ب", "پ")])

    def test_multiword_key_applies(self):
        d = NormalizationDict.default()
        assert normalize_text("فک کردن", d) == "فکر کردن"

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "dict.tsv"
        path.write_text("# comment\nقشنگه\tقشنگ است\n", encoding="utf-8")
        d = NormalizationDict.load(str(path))
        assert normalize_text("چه قشنگه", d) == "چه قشنگ است"
