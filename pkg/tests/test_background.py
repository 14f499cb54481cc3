import math

import pytest

from entropy_classifier.background import compute_df, fit_standardization, idf_from_df, train
from entropy_classifier.errors import ValidationError
from entropy_classifier.glossary import make_glossary
from entropy_classifier.model import (
    load_model,
    rewrite_bias_line,
    save_model,
    set_bias_direct,
)
from entropy_classifier.scoring import raw_score
from entropy_classifier.text import corpus_from_texts

from oracles import naive_idf, naive_mean_std


class TestComputeDf:
    def test_counts_documents_not_occurrences(self):
        g = make_glossary("x", [("a",), ("b",)])
        corpus = corpus_from_texts(["a a a", "a b", "c"])
        n, df = compute_df(g, corpus)
        assert n == 3
        assert df == {0: 2, 1: 1}

    def test_dense_zeros_included(self):
        g = make_glossary("x", [("a",), ("zz",)])
        _, df = compute_df(g, corpus_from_texts(["a"]))
        assert df == {0: 1, 1: 0}

    def test_multi_token_phrase_df(self):
        g = make_glossary("x", [("a", "b")])
        _, df = compute_df(g, corpus_from_texts(["a b here", "b a here", "a b a b"]))
        assert df == {0: 2}

    def test_empty_corpus_rejected(self):
        g = make_glossary("x", [("a",)])
        with pytest.raises(ValidationError, match="background corpus must be non-empty"):
            compute_df(g, corpus_from_texts([]))


class TestIdf:
    def test_formula(self):
        assert idf_from_df(0, 9) == pytest.approx(math.log(10.0) + 1.0, rel=1e-15)
        assert idf_from_df(9, 9) == pytest.approx(1.0, rel=1e-15)
        for df in range(0, 8):
            assert idf_from_df(df, 7) == naive_idf(df, 7)

    def test_monotone_decreasing_in_df(self):
        values = [idf_from_df(df, 50) for df in range(51)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_always_positive(self):
        assert idf_from_df(1000, 1000) > 0

    def test_preconditions(self):
        with pytest.raises(ValueError, match="n_docs"):
            idf_from_df(0, 0)
        with pytest.raises(ValueError, match="df"):
            idf_from_df(5, 4)
        with pytest.raises(ValueError, match="df"):
            idf_from_df(-1, 4)


class TestFitStandardization:
    def test_matches_two_pass_mean_std(self, finance_glossary, small_background):
        n, df = compute_df(finance_glossary, small_background)
        idf = {kid: idf_from_df(df[kid], n) for kid in df}
        mu, sigma = fit_standardization(finance_glossary, idf, 100, small_background)
        scores = [
            raw_score(d, finance_glossary,
                      train(finance_glossary, small_background)).raw_score
            for d in small_background
        ]
        exp_mu, exp_sigma = naive_mean_std(scores)
        assert mu == pytest.approx(exp_mu, rel=1e-14)
        assert sigma == pytest.approx(exp_sigma, rel=1e-14)

    def test_population_not_sample_std(self):
        # two docs scoring s and 0: population std is |s|/2, sample std larger
        g = make_glossary("x", [("a",), ("b",)])
        corpus = corpus_from_texts(["a b", "c c"])
        n, df = compute_df(g, corpus)
        idf = {kid: idf_from_df(df[kid], n) for kid in df}
        mu, sigma = fit_standardization(g, idf, 100, corpus)
        s = raw_score(corpus.documents[0], g, train(g, corpus)).raw_score
        assert mu == pytest.approx(s / 2, rel=1e-14)
        assert sigma == pytest.approx(s / 2, rel=1e-14)

    def test_zero_variance_rejected(self):
        g = make_glossary("x", [("a",)])
        corpus = corpus_from_texts(["no keywords here", "none here either"])
        n, df = compute_df(g, corpus)
        idf = {kid: idf_from_df(df[kid], n) for kid in df}
        with pytest.raises(ValidationError,
                           match="degenerate background corpus: zero score variance"):
            fit_standardization(g, idf, 100, corpus)


class TestTrain:
    def test_model_fields(self, finance_glossary, small_background):
        m = train(finance_glossary, small_background, k=50)
        assert m.category == "finance"
        assert m.glossary_digest == finance_glossary.digest()
        assert m.n_docs == len(small_background)
        assert m.k == 50
        assert m.bias == 3.0
        assert m.entropy_weighted is True
        assert set(m.df) == set(range(len(finance_glossary.phrases)))
        for kid, df in m.df.items():
            assert m.idf[kid] == naive_idf(df, m.n_docs)

    def test_ablation_flag(self, finance_glossary, small_background):
        m = train(finance_glossary, small_background, entropy_weighted=False)
        assert m.entropy_weighted is False
        # ablation raw score is the abundance alone
        b = raw_score(small_background.documents[0], finance_glossary, m)
        assert b.raw_score == b.tfidf_over_L

    def test_ablation_refits_mu_sigma(self, finance_glossary, small_background):
        m1 = train(finance_glossary, small_background)
        m2 = train(finance_glossary, small_background, entropy_weighted=False)
        assert (m1.mu, m1.sigma) != (m2.mu, m2.sigma)

    def test_invalid_k(self, finance_glossary, small_background):
        with pytest.raises(ValidationError, match="k must be >= 1"):
            train(finance_glossary, small_background, k=0)


class TestModelPersistence:
    def test_roundtrip_bitwise(self, tmp_path, finance_glossary, small_background):
        m = train(finance_glossary, small_background)
        path = tmp_path / "m.txt"
        save_model(m, path)
        loaded = load_model(path)
        assert loaded.category == m.category
        assert loaded.glossary_digest == m.glossary_digest
        assert loaded.phrases == m.phrases
        assert loaded.n_docs == m.n_docs
        assert loaded.k == m.k
        assert loaded.df == m.df
        # floats restored to the identical doubles
        assert loaded.mu.hex() == m.mu.hex()
        assert loaded.sigma.hex() == m.sigma.hex()
        assert loaded.bias.hex() == m.bias.hex()
        for kid in m.idf:
            assert loaded.idf[kid].hex() == m.idf[kid].hex()

    def test_save_is_deterministic(self, tmp_path, finance_glossary, small_background):
        m = train(finance_glossary, small_background)
        save_model(m, tmp_path / "a.txt")
        save_model(m, tmp_path / "b.txt")
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    def test_ablation_models_refuse_to_save(self, tmp_path, finance_glossary,
                                            small_background):
        m = train(finance_glossary, small_background, entropy_weighted=False)
        with pytest.raises(ValidationError, match="cannot be saved"):
            save_model(m, tmp_path / "m.txt")

    def test_set_bias_direct(self, finance_glossary, small_background):
        m = train(finance_glossary, small_background)
        m2 = set_bias_direct(m, -1.25)
        assert m2.bias == -1.25
        assert m2.mu == m.mu
        with pytest.raises(ValidationError, match="finite"):
            set_bias_direct(m, math.inf)

    def _saved(self, tmp_path, finance_glossary, small_background):
        path = tmp_path / "m.txt"
        save_model(train(finance_glossary, small_background), path)
        return path

    def test_rewrite_bias_line_touches_only_bias(self, tmp_path, finance_glossary,
                                                 small_background):
        path = self._saved(tmp_path, finance_glossary, small_background)
        before = path.read_text(encoding="utf-8").split("\n")
        rewrite_bias_line(path, 1.5)
        after = path.read_text(encoding="utf-8").split("\n")
        assert len(before) == len(after)
        diffs = [(a, b) for a, b in zip(before, after) if a != b]
        assert diffs == [(f"bias 3", "bias 1.5")]
        assert load_model(path).bias == 1.5

    def test_rewrite_requires_exactly_one_bias_line(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("mu 0\nsigma 1\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="exactly one bias record"):
            rewrite_bias_line(p, 2.0)

    @pytest.mark.parametrize("mutation,message", [
        (("format_version 1", "format_version 9"), "unsupported format_version"),
        (("n_docs 14", "n_docs 0"), "n_docs must be >= 1"),
        (("k 100", "k 0"), "k must be >= 1"),
        (("sigma ", "sigma -"), "sigma must be positive"),
        (("mu ", "mu nan-"), "mu is not a number"),
        (("kw 1 ", "kw 7 "), "dense and ascending"),
        (("kw 0 13 audit", "kw 0 99 audit"), "outside"),
        (("kw 0 13 audit", "kw 0 13 audits"), "glossary_digest does not match"),
    ])
    def test_load_rejects_corruption(self, tmp_path, finance_glossary,
                                     small_background, mutation, message):
        path = self._saved(tmp_path, finance_glossary, small_background)
        old, new = mutation
        content = path.read_text(encoding="utf-8")
        assert old in content
        path.write_text(content.replace(old, new, 1), encoding="utf-8")
        with pytest.raises(ValidationError, match=message):
            load_model(path)

    def test_load_rejects_reordered_header(self, tmp_path, finance_glossary,
                                           small_background):
        path = self._saved(tmp_path, finance_glossary, small_background)
        lines = path.read_text(encoding="utf-8").split("\n")
        lines[1], lines[2] = lines[2], lines[1]
        path.write_text("\n".join(lines), encoding="utf-8")
        with pytest.raises(ValidationError, match="expected 'category' record"):
            load_model(path)

    def test_load_rejects_truncation(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("format_version 1\ncategory x\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="truncated header"):
            load_model(p)

    def test_load_rejects_missing_keywords(self, tmp_path, finance_glossary,
                                           small_background):
        path = self._saved(tmp_path, finance_glossary, small_background)
        lines = [ln for ln in path.read_text(encoding="utf-8").split("\n")
                 if not ln.startswith("kw ")]
        path.write_text("\n".join(lines), encoding="utf-8")
        with pytest.raises(ValidationError, match="no kw records"):
            load_model(path)
