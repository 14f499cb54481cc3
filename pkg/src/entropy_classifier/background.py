"""Unsupervised training on a background corpus.

No positive samples are needed: the background corpus supplies per-keyword
document frequencies (hence idf) and the distribution of the raw score, whose
mean and population standard deviation standardize scores at inference time.
"""

from __future__ import annotations

import math

from .errors import ValidationError
from .glossary import Glossary, Matcher
from .model import BackgroundModel
from .scoring import effective_length, match_distribution, per_keyword_contributions, shannon_entropy
from .text import Corpus


def compute_df(glossary: Glossary, corpus: Corpus) -> tuple[int, dict[int, int]]:
    """Document frequency per keyword: in how many documents it matches at
    least once. Every keyword id is present in the result, zeros included."""
    if len(corpus) == 0:
        raise ValidationError("background corpus must be non-empty")
    matcher = Matcher(glossary)
    df = {kid: 0 for kid in range(len(glossary.phrases))}
    for doc in corpus:
        profile = matcher.profile(doc.tokens)
        for kid in profile.tf:
            df[kid] += 1
    return len(corpus), df


def idf_from_df(df: int, n_docs: int) -> float:
    """Smoothed idf: ln((n_docs+1)/(df+1)) + 1.

    Finite at df=0 and strictly positive, so abundance never degenerates.
    """
    if n_docs < 1:
        raise ValueError(f"n_docs must be >= 1, got {n_docs}")
    if not (0 <= df <= n_docs):
        raise ValueError(f"df must be in [0, n_docs], got df={df}, n_docs={n_docs}")
    return math.log((n_docs + 1) / (df + 1)) + 1.0


def _raw_corpus_scores(glossary: Glossary, idf: dict[int, float], k: int,
                       corpus: Corpus, entropy_weighted: bool) -> list[float]:
    matcher = Matcher(glossary)
    scores = []
    for doc in corpus:
        tf = matcher.profile(doc.tokens)
        L = effective_length(len(doc.tokens), k)
        tfidf_over_L = sum(per_keyword_contributions(tf, idf, L).values())
        if entropy_weighted:
            s = shannon_entropy(match_distribution(tf)) * tfidf_over_L
        else:
            s = tfidf_over_L
        scores.append(s)
    return scores


def fit_standardization(glossary: Glossary, idf: dict[int, float], k: int,
                        corpus: Corpus, entropy_weighted: bool = True) -> tuple[float, float]:
    """Mean and population standard deviation (divide by N) of the raw score
    over the background corpus, accumulated in corpus order."""
    if len(corpus) == 0:
        raise ValidationError("background corpus must be non-empty")
    scores = _raw_corpus_scores(glossary, idf, k, corpus, entropy_weighted)
    n = len(scores)
    mu = math.fsum(scores) / n
    sigma = math.sqrt(math.fsum((s - mu) ** 2 for s in scores) / n)
    if sigma == 0.0:
        raise ValidationError("degenerate background corpus: zero score variance")
    return mu, sigma


def train(glossary: Glossary, corpus: Corpus, k: int = 100,
          entropy_weighted: bool = True) -> BackgroundModel:
    """df -> idf -> (mu, sigma), assembled into a BackgroundModel with the
    default bias of 3.0 (three standard deviations above the background mean)."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    n_docs, df = compute_df(glossary, corpus)
    idf = {kid: idf_from_df(df[kid], n_docs) for kid in sorted(df)}
    mu, sigma = fit_standardization(glossary, idf, k, corpus, entropy_weighted)
    return BackgroundModel(
        category=glossary.category,
        glossary_digest=glossary.digest(),
        phrases=glossary.phrases,
        n_docs=n_docs,
        df=df,
        idf=idf,
        mu=mu,
        sigma=sigma,
        k=k,
        bias=3.0,
        entropy_weighted=entropy_weighted,
    )
