"""Feature weighting passes: normalized tf-idf and BM25.

Both schemes read only the content relation (raw occurrence counts) and
produce a fresh weighting relation, so re-running a pass is idempotent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .index import Index

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass(frozen=True)
class CorpusStats:
    """Document-frequency and length statistics feeding the weighting formulas.

    avgdl is None on an empty corpus (flagged undefined rather than zero).
    """

    n: int
    df: dict          # fID -> document frequency
    doc_len: dict     # dID -> total occurrence count
    avgdl: float | None
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B


def recompute_stats(index: Index, k1: float = DEFAULT_K1,
                    b: float = DEFAULT_B) -> CorpusStats:
    """Exact df and length statistics from the content relation."""
    n = index.num_documents
    df = {f: index.document_frequency(f) for f in range(index.num_features)}
    doc_len = {d: sum(index.document_features(d).values()) for d in range(n)}
    avgdl = (sum(doc_len.values()) / n) if n > 0 else None
    return CorpusStats(n=n, df=df, doc_len=doc_len, avgdl=avgdl, k1=k1, b=b)


def tfidf_normalized(index: Index) -> Index:
    """w(t, d) = tf * ln(N / df), then each document vector is scaled to
    unit Euclidean length.  Documents whose every term has zero idf keep
    their all-zero weights (there is nothing to normalize)."""
    stats = recompute_stats(index)
    weights: dict = {}
    for d in range(index.num_documents):
        row = {}
        for f, tf in index.document_features(d).items():
            idf = math.log(stats.n / stats.df[f])
            row[f] = tf * idf
        norm = math.sqrt(sum(w * w for w in row.values()))
        if norm > 0.0:
            row = {f: w / norm for f, w in row.items()}
        weights[d] = row
    return index.with_weighting(weights)


def bm25(index: Index, k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> Index:
    """w(t, d) = idf(t) * tf / (tf + k1 * (1 - b + b * |d| / avgdl)).

    idf is ln((N - df + 0.5) / (df + 0.5)) floored at zero, so terms in more
    than half of the corpus never get a negative weight.
    """
    if k1 <= 0:
        raise ValidationError("k1 must be > 0")
    if not 0 <= b <= 1:
        raise ValidationError("b must be in [0, 1]")
    stats = recompute_stats(index, k1=k1, b=b)
    weights: dict = {}
    for d in range(index.num_documents):
        row = {}
        dl = stats.doc_len[d]
        if stats.avgdl:
            length_norm = k1 * (1.0 - b + b * dl / stats.avgdl)
        else:
            length_norm = k1  # degenerate corpus of empty documents
        for f, tf in index.document_features(d).items():
            df = stats.df[f]
            idf = max(0.0, math.log((stats.n - df + 0.5) / (df + 0.5)))
            row[f] = idf * tf / (tf + length_norm)
        weights[d] = row
    return index.with_weighting(weights)
