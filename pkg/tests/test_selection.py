from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_labeled_corpus
from oracles import contingency_recount, mi_direct, mmi_direct, tfv_direct
from sentselect import (
    ClassTermFrequencies,
    Corpus,
    Document,
    FeaturizedCorpus,
    TextPipeline,
    build_feature_space,
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
from sentselect.selection import ContingencyCounts

cells_st = st.tuples(
    st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)
)


def counts_from_cells(a: int, b: int, c: int, d: int) -> ContingencyCounts:
    """A one-feature, two-class table with the given cells for class c1."""
    return ContingencyCounts(
        classes=("c1", "c2"),
        n_docs=a + b + c + d,
        class_doc_counts={"c1": a + c, "c2": b + d},
        doc_freq=(a + b,),
        class_feature_docs={"c1": (a,), "c2": (b,)},
    )


def _plain_fc(corpus: Corpus) -> FeaturizedCorpus:
    return FeaturizedCorpus.build(
        corpus, TextPipeline(use_stemming=False, use_bigrams=False)
    )


class TestCountContingency:
    def test_two_doc_hand_example(self):
        corpus = Corpus.build([
            Document("a", "f", "positive"),
            Document("b", "g", "negative"),
        ])
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        assert counts.cells(space.id_of("f"), "positive") == (1, 0, 0, 1)

    def test_saturated_feature(self):
        corpus = Corpus.build([
            Document("a", "f x", "positive"),
            Document("b", "f y", "positive"),
            Document("c", "f z", "negative"),
        ])
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        a, b, c, d = counts.cells(space.id_of("f"), "positive")
        assert (a, b, c, d) == (2, 1, 0, 0)

    def test_presence_not_multiplicity(self):
        corpus = Corpus.build([
            Document("a", "f f f", "positive"),
            Document("b", "g", "negative"),
        ])
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        assert counts.doc_freq[space.id_of("f")] == 1

    def test_matches_brute_force_recount(self):
        rng = random.Random(42)
        corpus = random_labeled_corpus(rng, n_docs=8, vocab_size=6)
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        docs_tokens = [doc.raw_text.split() for doc in corpus.documents]
        labels = [doc.label for doc in corpus.documents]
        for fid, feature in enumerate(space.features):
            expected = contingency_recount(docs_tokens, labels, list(corpus.classes), feature.surface)
            for cls in corpus.classes:
                assert counts.cells(fid, cls) == expected[cls]

    def test_row_identities(self):
        rng = random.Random(7)
        corpus = random_labeled_corpus(rng, n_docs=12, vocab_size=9)
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        for fid in range(space.size):
            for cls in corpus.classes:
                a, b, c, d = counts.cells(fid, cls)
                assert a + b + c + d == counts.n_docs
                assert a + c == corpus.class_counts[cls]
                assert a + b == counts.doc_freq[fid]


class TestScores:
    def test_df_values(self):
        counts = counts_from_cells(2, 1, 3, 2)
        assert score_df(counts, 0) == 3.0
        assert score_df(counts_from_cells(0, 0, 4, 4), 0) == 0.0

    def test_tfv_examples(self):
        tfs = ClassTermFrequencies(classes=("c1", "c2"), tf={"c1": (5, 4, 0), "c2": (5, 0, 0)})
        assert score_tfv(tfs, 0) == 0.0
        assert score_tfv(tfs, 1) == 8.0
        assert score_tfv(tfs, 2) == 0.0

    def test_mi_examples(self):
        assert score_mi(counts_from_cells(3, 1, 1, 3), 0, "c1") == 1.5
        assert score_mi(counts_from_cells(0, 2, 3, 3), 0, "c1") == 0.0
        assert score_mi(counts_from_cells(1, 1, 1, 1), 0, "c1") == 1.0

    def test_mmi_examples(self):
        assert score_mmi(counts_from_cells(1, 1, 1, 1), 0, "c1") == 0.0
        assert score_mmi(counts_from_cells(3, 1, 1, 3), 0, "c1") == 0.03125
        assert score_mmi(counts_from_cells(4, 0, 0, 4), 0, "c1") == 0.0625

    @given(cells_st)
    @settings(max_examples=500)
    def test_mi_matches_direct_form(self, cells):
        counts = counts_from_cells(*cells)
        direct = float(mi_direct(*cells))
        assert score_mi(counts, 0, "c1") == pytest.approx(direct, rel=1e-12, abs=1e-300)

    @given(cells_st)
    @settings(max_examples=500)
    def test_mmi_antisymmetry_exact(self, cells):
        counts = counts_from_cells(*cells)
        assert score_mmi(counts, 0, "c1") + score_mmi(counts, 0, "c2") == 0.0

    @given(cells_st)
    @settings(max_examples=500)
    def test_mmi_zero_iff_independent_products(self, cells):
        a, b, c, d = cells
        counts = counts_from_cells(a, b, c, d)
        assert (score_mmi(counts, 0, "c1") == 0.0) == (a * d == c * b)

    @given(st.integers(1, 40), st.integers(1, 40))
    def test_mi_is_one_under_independence(self, row, col):
        # independence construction: A=r*c, B=r*(k-c), C=(k-r)*c, D=(k-r)*(k-c)
        # makes A/N == ((A+B)/N) * ((A+C)/N) hold exactly
        k = 41
        a = row * col
        b = row * (k - col)
        c = (k - row) * col
        d = (k - row) * (k - col)
        counts = counts_from_cells(a, b, c, d)
        assert score_mi(counts, 0, "c1") == pytest.approx(1.0, abs=1e-12)
        assert score_mmi(counts, 0, "c1") == 0.0

    def test_df_invariant_to_relabeling(self):
        counts = counts_from_cells(2, 3, 1, 4)
        swapped = counts_from_cells(3, 2, 4, 1)  # classes exchanged
        assert score_df(counts, 0) == score_df(swapped, 0)

    def test_tfv_invariant_to_class_permutation(self):
        tfs = ClassTermFrequencies(classes=("c1", "c2"), tf={"c1": (4,), "c2": (9,)})
        swapped = ClassTermFrequencies(classes=("c1", "c2"), tf={"c1": (9,), "c2": (4,)})
        assert score_tfv(tfs, 0) == score_tfv(swapped, 0)

    def test_degenerate_feature_scores_zero(self):
        # feature present in every document
        counts = counts_from_cells(3, 5, 0, 0)
        assert score_mmi(counts, 0, "c1") == 0.0


def _toy_ranking_setup(seed=5, n_docs=20, vocab=20):
    rng = random.Random(seed)
    corpus = random_labeled_corpus(rng, n_docs=n_docs, vocab_size=vocab)
    fc = _plain_fc(corpus)
    space = build_feature_space(fc)
    return corpus, fc, space, count_contingency(fc, space), class_term_frequencies(fc, space)


class TestRanking:
    @pytest.mark.parametrize("method", ["df", "tfv", "mi", "mmi"])
    def test_matches_independent_rescoring(self, method):
        corpus, fc, space, counts, tfs = _toy_ranking_setup()
        ranking = rank_features(counts, tfs, method)
        # oracle: recompute every score from raw cells with Fractions and re-sort
        oracle_scores = []
        for fid in range(space.size):
            if method == "df":
                value = Fraction(counts.doc_freq[fid])
            elif method == "tfv":
                value = tfv_direct([tfs.tf[c][fid] for c in corpus.classes])
            else:
                direct = mi_direct if method == "mi" else mmi_direct
                value = max(direct(*counts.cells(fid, c)) for c in corpus.classes)
            oracle_scores.append(value)
        oracle_order = sorted(range(space.size), key=lambda f: (-oracle_scores[f], f))
        assert list(ranking.order) == oracle_order
        assert select_top_k(ranking, 5) == set(oracle_order[:5])

    def test_binary_max_aggregation_is_absolute_value(self):
        _, _, space, counts, tfs = _toy_ranking_setup(seed=9)
        ranking = rank_features(counts, tfs, "mmi", "max")
        for fid in range(space.size):
            one_class = score_mmi(counts, fid, "negative")
            assert ranking.scores[fid] == abs(one_class)

    def test_mean_aggregation_of_antisymmetric_scores_is_zero(self):
        _, _, space, counts, tfs = _toy_ranking_setup(seed=9)
        ranking = rank_features(counts, tfs, "mmi", "mean")
        assert all(s == 0.0 for s in ranking.scores)

    def test_tie_break_ascending_id(self):
        tfs = ClassTermFrequencies(classes=("c1", "c2"), tf={"c1": (2, 2, 2), "c2": (2, 2, 2)})
        ranking = rank_features(None, tfs, "tfv")
        assert ranking.order == (0, 1, 2)

    def test_tfv_direction_flag(self):
        tfs = ClassTermFrequencies(classes=("c1", "c2"), tf={"c1": (9, 1), "c2": (0, 1)})
        descending = rank_features(None, tfs, "tfv")
        ascending = rank_features(None, tfs, "tfv", tfv_ascending=True)
        assert descending.order == (0, 1)
        assert ascending.order == (1, 0)

    def test_unknown_method_rejected(self):
        _, _, _, counts, tfs = _toy_ranking_setup()
        with pytest.raises(ValueError, match="method"):
            rank_features(counts, tfs, "chi2")

    def test_degenerate_ids_recorded(self):
        corpus = Corpus.build([
            Document("a", "f x", "positive"),
            Document("b", "f y", "negative"),
        ])
        fc = _plain_fc(corpus)
        space = build_feature_space(fc)
        counts = count_contingency(fc, space)
        ranking = rank_features(counts, None, "mmi")
        assert space.id_of("f") in ranking.degenerate

    def test_select_top_k_bounds(self):
        _, _, space, counts, tfs = _toy_ranking_setup()
        ranking = rank_features(counts, tfs, "df")
        assert select_top_k(ranking, space.size) == set(range(space.size))
        assert select_top_k(ranking, 1) == {ranking.order[0]}
        with pytest.raises(ValueError):
            select_top_k(ranking, 0)
        with pytest.raises(ValueError):
            select_top_k(ranking, space.size + 1)

    def test_ranking_determinism(self):
        _, _, _, counts, tfs = _toy_ranking_setup(seed=13)
        first = rank_features(counts, tfs, "mmi")
        second = rank_features(counts, tfs, "mmi")
        assert first == second

    def test_tsv_export_format(self):
        corpus, fc, space, counts, tfs = _toy_ranking_setup(seed=2, n_docs=6, vocab=4)
        ranking = rank_features(counts, tfs, "df")
        lines = ranking_to_tsv(ranking, space).splitlines()
        assert len(lines) == space.size
        rank, fid, surface, score = lines[0].split("\t")
        assert rank == "1"
        assert space.features[int(fid)].surface == surface
        assert len(score.split(".")[1]) == 6

    def test_all_scores_finite(self):
        _, _, space, counts, tfs = _toy_ranking_setup(seed=21)
        for method in ("df", "tfv", "mi", "mmi"):
            ranking = rank_features(counts, tfs, method)
            assert all(s == s and abs(s) != float("inf") for s in ranking.scores)
