"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Tolerances are pinned here; nothing is deferred to later calibration.
"""

import math
import os
import time

import numpy as np
import pytest

from jatecs import (AdaBoostMHLearner, KnnLearner, NaiveBayesLearner,
                    RocchioLearner, SparseInstance, bm25, build_projection,
                    classify_category, classify_document, deserialize_index,
                    kfold_evaluate, learn_quantifiers, make_folds,
                    micro_macro, project, quantify, read_arff, read_csv,
                    read_libsvm, serialize_index, tfidf_normalized, train,
                    write_libsvm)
from jatecs.cli import main as cli_main
from jatecs.evaluation import ContingencyTable, ContingencyTableSet, measures
from jatecs.experiments import STRATIFIED
from jatecs.projection import (ACHLIOPTAS, LIGHTWEIGHT_RI, RANDOM_INDEXING,
                               model_file_bytes)
from jatecs.rng import SplitMix64
from jatecs.tsr import (CHI2, IG, ODDS_RATIO, PMI, CooccurrenceCounts,
                        FeatureRanking, select_round_robin, tsr_score)

from conftest import (aligned_test_index, make_corpus, random_corpus,
                      separable_corpus)
from test_tsr import all_tuples, oracle_scores
from test_projection import random_sparse_doc_index, _pairwise_dots_sparse


def _report(number, description, ok):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number:02d} [{status}] {description}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_01_index_round_trip(tmp_path):
    start = time.monotonic()
    ok = True
    for seed in range(200):
        index = random_corpus(seed, max_docs=100)
        first = tmp_path / f"a{seed}"
        second = tmp_path / f"b{seed}"
        serialize_index(index, first)
        serialize_index(deserialize_index(first), second)
        names = sorted(os.listdir(first))
        if names != sorted(os.listdir(second)):
            ok = False
            break
        for name in names:
            if (first / name).read_bytes() != (second / name).read_bytes():
                ok = False
                break
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 10.0
    _report(1, f"index round trip byte-identical on 200 corpora "
               f"({elapsed:.1f}s < 10s)", ok)


GOLDEN_LIBSVM = [
    ("1 3:2 7:1.5\n", [SparseInstance(("1",), ((3, 2.0), (7, 1.5)))]),
    ("+1 1:1 # c\n", [SparseInstance(("+1",), ((1, 1.0),))]),
    ("a,b 2:0.5 9:3\n", [SparseInstance(("a", "b"), ((2, 0.5), (9, 3.0)))]),
    (" 4:2\n", [SparseInstance((), ((4, 2.0),))]),
    ("2\n# only a comment\n", [SparseInstance(("2",), ())]),
]

GOLDEN_CSV = [
    ("d0\tsports\tthe cat sat\n", "\t", [("d0", ("sports",), "the cat sat")]),
    ("d1\t\tno labels here\n", "\t", [("d1", (), "no labels here")]),
    ("d2,a,text, with, commas\n", ",",
     [("d2", ("a",), "text, with, commas")]),
    ("d3\ta,b\tx\nd4\tb\ty z\n", "\t",
     [("d3", ("a", "b"), "x"), ("d4", ("b",), "y z")]),
]

GOLDEN_ARFF = [
    # dense with string, numeric and nominal class
    ("@relation r\n@attribute t string\n@attribute n numeric\n"
     "@attribute class {x,y}\n@data\n'hello world', 2, x\n",
     [(("hello world"), ("x",), (("n", 2, 2.0),))]),
    # sparse rows with comments
    ("% c\n@relation r\n@attribute a numeric\n@attribute b numeric\n"
     "@attribute class {p,q}\n@data\n{0 3, 2 q}\n{}\n",
     [("", ("q",), (("a", 3, 3.0),)), ("", (), ())]),
    # multirow dense, nominal feature attribute
    ("@relation r\n@attribute color {red,blue}\n@attribute class {u,v}\n"
     "@data\nred, u\nblue, v\n",
     [("", ("u",), (("color=red", 1, 1.0),)),
      ("", ("v",), (("color=blue", 1, 1.0),))]),
]


def test_criterion_02_parser_golden_files(tmp_path):
    checked = 0
    ok = True
    for i, (content, expected) in enumerate(GOLDEN_LIBSVM):
        path = tmp_path / f"g{i}.svm"
        path.write_text(content, encoding="utf-8")
        ok = ok and read_libsvm(path) == expected
        checked += 1
    for i, (content, sep, expected) in enumerate(GOLDEN_CSV):
        path = tmp_path / f"g{i}.csv"
        path.write_text(content, encoding="utf-8")
        docs = read_csv(path, separator=sep)
        got = [(d.name, d.labels, d.text) for d in docs]
        ok = ok and got == expected
        checked += 1
    for i, (content, expected) in enumerate(GOLDEN_ARFF):
        path = tmp_path / f"g{i}.arff"
        path.write_text(content, encoding="utf-8")
        _, docs = read_arff(path)
        got = [(d.text, d.labels, d.features) for d in docs]
        ok = ok and got == expected
        checked += 1

    from test_corpus import _random_instance
    rng = SplitMix64(2024)
    instances = [_random_instance(rng) for _ in range(100)]
    path = tmp_path / "identity.svm"
    write_libsvm(instances, path)
    ok = ok and read_libsvm(path) == instances
    _report(2, f"{checked} golden parser files plus 100-instance LibSVM "
               "write/parse identity", ok and checked >= 10)


def test_criterion_03_tsr_oracles():
    ok = True
    for a, b, c, d in all_tuples(12):
        expected = oracle_scores(a, b, c, d)
        counts = CooccurrenceCounts(a, b, c, d)
        for func in (IG, CHI2, PMI, ODDS_RATIO):
            if abs(tsr_score(counts, func) - expected[func]) > 1e-9:
                ok = False
    perfect = CooccurrenceCounts(5, 0, 0, 5)
    ok = ok and abs(tsr_score(perfect, CHI2) - perfect.n) <= 1e-9
    ok = ok and abs(tsr_score(perfect, IG) - 1.0) <= 1e-9
    indep = CooccurrenceCounts(6, 6, 6, 6)
    ok = ok and tsr_score(indep, CHI2) == 0.0
    ok = ok and abs(tsr_score(indep, IG)) <= 1e-9
    ok = ok and abs(tsr_score(indep, PMI)) <= 1e-9
    ok = ok and abs(tsr_score(indep, ODDS_RATIO)) < 0.3  # smoothing bias
    _report(3, "TSR functions equal brute-force oracle on all tables with "
               "N <= 12 (tol 1e-9)", ok)


def test_criterion_04_round_robin_exhaustive():
    rankings = [
        FeatureRanking(scope=c, entries=tuple(
            (c * 100 + i, float(9 - i)) for i in range(9)))
        for c in range(3)]
    groups = [{c * 100 + i for i in range(9)} for c in range(3)]
    ok = True
    for k in range(1, 10):
        selected = select_round_robin(rankings, k)
        takes = sorted(len(selected & g) for g in groups)
        low, high = k // 3, -(-k // 3)
        ok = ok and len(selected) == k
        ok = ok and all(t in (low, high) for t in takes)
    _report(4, "round robin deals ceil/floor(k/3) features per category "
               "for k in 1..9", ok)


def test_criterion_05_weighting():
    rng = SplitMix64(500)
    specs = []
    for d in range(500):
        feats = {f"w{rng.next_below(120)}": 1 + rng.next_below(6)
                 for _ in range(1 + rng.next_below(15))}
        feats["ubiquitous"] = 1
        specs.append((f"d{d}", feats, []))
    index = make_corpus(specs, ["c"])
    weighted = tfidf_normalized(index)
    ok = True
    for d in range(weighted.num_documents):
        row = weighted.document_weights(d)
        norm = math.sqrt(sum(w * w for w in row.values()))
        if norm > 0.0 and abs(norm - 1.0) > 1e-9:
            ok = False
    everywhere = weighted.features.id("ubiquitous")
    ok = ok and all(weighted.document_weights(d).get(everywhere, 0.0) == 0.0
                    for d in range(weighted.num_documents))

    two = make_corpus([("d0", {"a": 2}, []), ("d1", {"b": 1, "c": 1}, [])],
                      ["c"])
    k1 = 1.6
    hand = math.log((2 - 1 + 0.5) / (1 + 0.5)) * 2 / (2 + k1)
    got = bm25(two, k1=k1, b=0.4).document_weights(0)[0]
    ok = ok and abs(got - hand) <= 1e-12
    _report(5, "tf-idf unit norms on 500 docs (1e-9); ubiquitous weight 0; "
               "BM25 avgdl hand case (1e-12)", ok)


def test_criterion_06_learners_separable():
    start = time.monotonic()
    index = separable_corpus(n_per_cat=100)
    plan = make_folds(index, 10, STRATIFIED, seed=1)
    learners = [NaiveBayesLearner(), RocchioLearner(), KnnLearner(),
                AdaBoostMHLearner(iterations=100)]
    ok = True
    for learner in learners:
        tables = kfold_evaluate(learner, index, plan)
        if micro_macro(tables)["macroF1"] != 1.0:
            ok = False

    agreement = separable_corpus(n_per_cat=10, seed=3)
    for learner in learners:
        classifier = train(learner, agreement)
        by_cat = {c: classify_category(classifier, agreement, c)
                  for c in range(agreement.num_categories)}
        for d in range(agreement.num_documents):
            by_doc = classify_document(classifier, agreement, d)
            for c in range(agreement.num_categories):
                if by_cat[c][d].scores[c] != by_doc.scores[c] or \
                        by_cat[c][d].decisions[c] != by_doc.decisions[c]:
                    ok = False
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 30.0
    _report(6, "NB/Rocchio/KNN/AdaBoostMH macro-F1 = 1.0 under stratified "
               f"10-fold; path agreement ({elapsed:.1f}s < 30s)", ok)


def test_criterion_07_boost_z_product():
    from test_learners import _noisy_corpus
    index = _noisy_corpus(n_per_cat=30, flip_every=10)
    classifier = train(AdaBoostMHLearner(iterations=50), index)
    ok = True
    for z_values in classifier.z_values:
        ok = ok and len(z_values) == 50
        product = 1.0
        previous = 1.0
        for z in z_values:
            product *= z
            if product > previous + 1e-15:
                ok = False
            previous = product
    _report(7, "AdaBoostMH per-round Z product non-increasing over T=50 "
               "on noisy data", ok)


def test_criterion_08_evaluation_identities():
    tables = ContingencyTableSet({
        0: ContingencyTable(5, 2, 3, 1), 1: ContingencyTable(1, 7, 0, 2),
        2: ContingencyTable(0, 9, 1, 0), 3: ContingencyTable(2, 2, 2, 2)})
    tp = sum(t.tp for t in tables.per_category.values())
    fp = sum(t.fp for t in tables.per_category.values())
    fn = sum(t.fn for t in tables.per_category.values())
    pooled_p = tp / (tp + fp)
    pooled_r = tp / (tp + fn)
    pooled_f1 = 2 * pooled_p * pooled_r / (pooled_p + pooled_r)
    ok = abs(micro_macro(tables)["microF1"] - pooled_f1) <= 1e-12

    p, r, f1, acc = measures(ContingencyTable(tp=2, fp=1, fn=1, tn=0))
    ok = ok and abs(p - 2 / 3) < 1e-12 and abs(r - 2 / 3) < 1e-12
    ok = ok and abs(f1 - 2 / 3) < 1e-12 and abs(acc - 0.5) < 1e-12

    ok = ok and measures(ContingencyTable()) == (1.0, 1.0, 1.0, 1.0)
    ok = ok and measures(ContingencyTable(tp=0, fp=2, tn=1))[0] == 0.0
    ok = ok and measures(ContingencyTable(tp=0, fn=2, tn=1))[1] == 0.0
    ok = ok and measures(ContingencyTable(tp=0, fp=2, fn=2))[2] == 0.0
    _report(8, "micro-F1 pooled identity (1e-12); hand case 2/3; degenerate "
               "conventions", ok)


def _planted_corpus(n_pos, n_neg, pos_with_a, neg_with_a, name_prefix):
    specs = []
    for i in range(n_pos):
        token = "tokA" if i < pos_with_a else "tokB"
        specs.append((f"{name_prefix}p{i}", {token: 1}, ["target"]))
    for i in range(n_neg):
        token = "tokA" if i < neg_with_a else "tokB"
        specs.append((f"{name_prefix}n{i}", {token: 1}, []))
    return specs


def test_criterion_09_quantification():
    start = time.monotonic()
    train_index = make_corpus(
        _planted_corpus(500, 500, pos_with_a=400, neg_with_a=100,
                        name_prefix="tr"), ["target"])
    pool = learn_quantifiers(NaiveBayesLearner(), train_index, folds=50)
    rates = pool.rates[0]
    ok = abs(rates.tpr - 0.8) <= 1e-12 and abs(rates.fpr - 0.2) <= 1e-12

    cc_errors = []
    acc_errors = []
    for tenth in range(1, 10):
        p = tenth / 10
        n_pos = int(2000 * p)
        n_neg = 2000 - n_pos
        specs = _planted_corpus(n_pos, n_neg,
                                pos_with_a=round(0.8 * n_pos),
                                neg_with_a=round(0.2 * n_neg),
                                name_prefix=f"t{tenth}")
        test = aligned_test_index(train_index, specs)
        estimates = quantify(pool, test)
        acc_errors.append(abs(estimates.of("ACC", 0) - p))
        cc_errors.append(abs(estimates.of("CC", 0) - p))
    ok = ok and all(err <= 0.02 for err in acc_errors)
    ok = ok and sum(cc_errors) / 9 > sum(acc_errors) / 9  # strict

    from jatecs.quantification import _corrected
    ok = ok and _corrected(0.5, 0.8, 0.2) == pytest.approx(0.5, abs=1e-15)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 60.0
    _report(9, "ACC within 0.02 across prevalences 0.1..0.9 with planted "
               f"tpr=0.8/fpr=0.2; AE(CC) > AE(ACC) ({elapsed:.1f}s < 60s)", ok)


def test_criterion_10_random_projection():
    index = random_sparse_doc_index()  # 50 random sparse documents
    original = _pairwise_dots_sparse(index)
    ok = True
    for kind, nz in ((RANDOM_INDEXING, 10), (LIGHTWEIGHT_RI, 10),
                     (ACHLIOPTAS, 0)):
        model = build_projection(index, kind, 1024, nonzeros=nz, seed=99)
        matrix = project(model, index)
        got = (matrix @ matrix.T)[np.triu_indices(len(matrix), k=1)]
        if np.corrcoef(original, got)[0, 1] <= 0.9:
            ok = False

    base = make_corpus([("d0", {"a": 1, "b": 1}, []),
                        ("d1", {"b": 1, "c": 1}, []),
                        ("d2", {"a": 1, "b": 1, "c": 1}, [])], ["c"])
    x = {0: 1.0, 1: 2.0}
    y = {1: 0.5, 2: 4.0}
    combo = {f: 2 * x.get(f, 0.0) + 3 * y.get(f, 0.0) for f in (0, 1, 2)}
    lin_index = base.with_weighting({0: x, 1: y, 2: combo})
    model = build_projection(lin_index, RANDOM_INDEXING, 256, 8, seed=5)
    m = project(model, lin_index)
    ok = ok and bool(np.all(np.abs(m[2] - (2 * m[0] + 3 * m[1])) <= 1e-9))

    one = build_projection(index, RANDOM_INDEXING, 1024, 10, seed=99)
    two = build_projection(index, RANDOM_INDEXING, 1024, 10, seed=99)
    ok = ok and model_file_bytes(one) == model_file_bytes(two)
    _report(10, "dot-product correlation > 0.9 at dim=1024; linearity 1e-9; "
                "seed-identical model bytes", ok)


def test_criterion_11_cli_pipeline_smoke(tmp_path):
    toy = os.path.join(os.path.dirname(__file__), "..", "src", "jatecs",
                       "data", "toy")
    args = ["pipeline", "--input", os.path.join(toy, "corpus.csv"),
            "--categories", os.path.join(toy, "categories.txt"),
            "--extractor", "chargrams", "--ngram", "4", "--func", "ig",
            "--policy", "rr", "--k", "500", "--scheme", "tfidf",
            "--learner", "nb"]
    code_a = cli_main(args + ["--out", str(tmp_path / "a")])
    code_b = cli_main(args + ["--out", str(tmp_path / "b")])
    ok = code_a == 0 and code_b == 0
    ok = ok and (tmp_path / "a" / "eval.tsv").exists()
    for name in ("eval.tsv", "predictions.tsv", "predictions-scores.tsv"):
        ok = ok and (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()
    for sub in ("index", "tsr", "weight"):
        for f in sorted(os.listdir(tmp_path / "a" / sub)):
            ok = ok and (tmp_path / "a" / sub / f).read_bytes() == \
                (tmp_path / "b" / sub / f).read_bytes()
    _report(11, "pipeline on bundled toy corpus exits 0, emits eval.tsv, "
                "byte-identical across runs", ok)
