"""Shared corpus builders for the test suite."""

import pytest

from jatecs import build_index
from jatecs.index import ConceptDb, Index
from jatecs.rng import SplitMix64


def make_corpus(doc_specs, categories):
    """doc_specs: list of (name, {featureText: count}, [labels])."""
    docs = [(name, list(feats.items())) for name, feats, _ in doc_specs]
    labels = [(name, labs) for name, _, labs in doc_specs]
    return build_index(docs, labels, categories)


def aligned_test_index(train_index, doc_specs):
    """Test index sharing the training feature space: known feature texts
    keep their training ids, unseen ones get fresh ids after them."""
    names = list(train_index.features.names)
    ids = {text: i for i, text in enumerate(names)}
    doc_names, content, weights, classification = [], {}, {}, {}
    for d, (name, feats, labels) in enumerate(doc_specs):
        doc_names.append(name)
        row = {}
        for text, count in feats.items():
            if text not in ids:
                ids[text] = len(names)
                names.append(text)
            row[ids[text]] = count
        content[d] = row
        weights[d] = {f: float(n) for f, n in row.items()}
        classification[d] = [train_index.categories.id(lab) for lab in labels]
    return Index(train_index.categories, ConceptDb(names, kind="feature"),
                 ConceptDb(doc_names, kind="document"), content,
                 classification, weights)


def random_corpus(seed, max_docs=100):
    """Small random multilabel corpus driven by the deterministic RNG."""
    rng = SplitMix64(seed)
    n_cats = 1 + rng.next_below(4)
    categories = [f"cat{i}" for i in range(n_cats)]
    vocab = [f"w{i}" for i in range(5 + rng.next_below(30))]
    n_docs = 1 + rng.next_below(max_docs)
    doc_specs = []
    for d in range(n_docs):
        feats = {}
        for _ in range(rng.next_below(12)):
            feats[vocab[rng.next_below(len(vocab))]] = 1 + rng.next_below(5)
        labels = [c for c in categories if rng.next_below(3) == 0]
        doc_specs.append((f"doc{d}", feats, labels))
    return make_corpus(doc_specs, categories)


def separable_docs(n_per_cat=100, vocab_size=12, words_per_doc=8, seed=7,
                   name_suffix=""):
    """Two categories with disjoint vocabularies; trivially separable."""
    rng = SplitMix64(seed)
    doc_specs = []
    for c, cat in enumerate(("alpha", "beta")):
        prefix = "a" if c == 0 else "b"
        vocab = [f"{prefix}{i}" for i in range(vocab_size)]
        for i in range(n_per_cat):
            feats = {}
            for _ in range(words_per_doc):
                w = vocab[rng.next_below(vocab_size)]
                feats[w] = feats.get(w, 0) + 1
            doc_specs.append((f"{cat}{i}{name_suffix}", feats, [cat]))
    return doc_specs


def separable_corpus(n_per_cat=100, vocab_size=12, words_per_doc=8, seed=7):
    return make_corpus(
        separable_docs(n_per_cat, vocab_size, words_per_doc, seed),
        categories=["alpha", "beta"])


@pytest.fixture
def tiny_index():
    """3 docs, 4 features, 2 categories; one empty, one multilabel doc."""
    return make_corpus(
        [("d0", {"cat": 2, "sat": 1}, ["sports"]),
         ("d1", {"dog": 1, "cat": 1, "ran": 3}, ["sports", "politics"]),
         ("d2", {}, [])],
        categories=["sports", "politics"])
