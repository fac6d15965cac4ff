"""Fold plans, cross-validated evaluation, grid search."""

import pytest

from jatecs import (KnnLearner, NaiveBayesLearner, ValidationError,
                    grid_search, kfold_evaluate, make_folds, micro_macro)
from jatecs.experiments import SIMPLE, STRATIFIED

from conftest import make_corpus, separable_corpus


def _fold_sizes(plan):
    sizes = [0] * plan.k
    for fold in plan.assignment.values():
        sizes[fold] += 1
    return sizes


class TestMakeFolds:
    def test_simple_even_sizes(self):
        index = make_corpus([(f"d{i}", {"w": 1}, []) for i in range(10)], ["c"])
        plan = make_folds(index, 5, SIMPLE, seed=3)
        assert _fold_sizes(plan) == [2, 2, 2, 2, 2]

    def test_sizes_differ_by_at_most_one(self):
        index = make_corpus([(f"d{i}", {"w": 1}, []) for i in range(13)], ["c"])
        plan = make_folds(index, 4, SIMPLE, seed=1)
        sizes = _fold_sizes(plan)
        assert max(sizes) - min(sizes) <= 1

    def test_every_document_in_exactly_one_fold(self):
        index = separable_corpus(n_per_cat=17)
        plan = make_folds(index, 7, STRATIFIED, seed=5)
        assert sorted(plan.assignment) == list(range(index.num_documents))

    def test_leave_one_out_boundary(self):
        index = make_corpus([(f"d{i}", {"w": 1}, []) for i in range(6)], ["c"])
        plan = make_folds(index, 6, SIMPLE, seed=0)
        assert sorted(_fold_sizes(plan)) == [1] * 6

    def test_stratified_hand_case(self):
        # 10 docs, 4 positive, k=2: exactly 2 positives per fold
        specs = [(f"p{i}", {"w": 1}, ["c"]) for i in range(4)]
        specs += [(f"n{i}", {"w": 1}, []) for i in range(6)]
        index = make_corpus(specs, ["c"])
        plan = make_folds(index, 2, STRATIFIED, seed=11)
        members = index.category_documents(0)
        per_fold = [0, 0]
        for d, fold in plan.assignment.items():
            if d in members:
                per_fold[fold] += 1
        assert per_fold == [2, 2]
        assert sorted(_fold_sizes(plan)) == [5, 5]

    @pytest.mark.parametrize("n_pos,k", [(3, 5), (10, 5), (7, 3), (2, 2)])
    def test_stratified_positive_balance(self, n_pos, k):
        specs = [(f"p{i}", {"w": 1}, ["c"]) for i in range(n_pos)]
        specs += [(f"n{i}", {"w": 1}, []) for i in range(20)]
        index = make_corpus(specs, ["c"])
        plan = make_folds(index, k, STRATIFIED, seed=2)
        members = index.category_documents(0)
        per_fold = [0] * k
        for d, fold in plan.assignment.items():
            if d in members:
                per_fold[fold] += 1
        assert max(per_fold) - min(per_fold) <= 1

    def test_k_out_of_range(self):
        index = make_corpus([("d0", {"w": 1}, []), ("d1", {"w": 1}, [])], ["c"])
        with pytest.raises(ValidationError):
            make_folds(index, 3, SIMPLE, 0)
        with pytest.raises(ValidationError):
            make_folds(index, 1, SIMPLE, 0)

    def test_deterministic_given_seed(self):
        index = separable_corpus(n_per_cat=10)
        a = make_folds(index, 4, STRATIFIED, seed=9)
        b = make_folds(index, 4, STRATIFIED, seed=9)
        c = make_folds(index, 4, STRATIFIED, seed=10)
        assert a.assignment == b.assignment
        assert a.assignment != c.assignment


class TestKfoldEvaluate:
    def test_perfect_separable_corpus(self):
        index = separable_corpus(n_per_cat=20)
        plan = make_folds(index, 10, STRATIFIED, seed=1)
        tables = kfold_evaluate(NaiveBayesLearner(), index, plan)
        assert micro_macro(tables)["macroF1"] == 1.0

    def test_table_totals_partition_documents(self):
        index = separable_corpus(n_per_cat=12)
        plan = make_folds(index, 4, STRATIFIED, seed=1)
        tables = kfold_evaluate(NaiveBayesLearner(), index, plan)
        assert tables.global_table.total == \
            index.num_documents * index.num_categories
        for t in tables.per_category.values():
            assert t.total == index.num_documents

    def test_same_seed_identical_tables(self):
        index = separable_corpus(n_per_cat=8)
        plan = make_folds(index, 4, SIMPLE, seed=21)
        a = kfold_evaluate(KnnLearner(k=3), index, plan)
        b = kfold_evaluate(KnnLearner(k=3), index, plan)
        assert a.per_category == b.per_category

    def test_k_equals_d_is_leave_one_out(self):
        index = separable_corpus(n_per_cat=5)
        plan = make_folds(index, index.num_documents, SIMPLE, seed=2)
        tables = kfold_evaluate(NaiveBayesLearner(), index, plan)
        assert tables.global_table.total == \
            index.num_documents * index.num_categories
        assert micro_macro(tables)["macroF1"] == 1.0

    def test_k_equals_d_matches_sequential_leave_one_out(self):
        # independent oracle: explicit hold-one-out loop, cellwise equality
        from jatecs import classify_document, subset_index, train
        from jatecs.evaluation import ContingencyTable, ContingencyTableSet, \
            compare
        index = separable_corpus(n_per_cat=4, words_per_doc=5)
        learner = NaiveBayesLearner()
        manual = ContingencyTableSet({})
        for d in range(index.num_documents):
            rest = set(range(index.num_documents)) - {d}
            classifier = train(learner, subset_index(index, keep_docs=rest))
            held_out = subset_index(index, keep_docs={d})
            result = classify_document(classifier, held_out, 0)
            predictions = {0: tuple(c for c, v in result.decisions.items()
                                    if v)}
            gold = {0: held_out.document_categories(0)}
            manual = manual + compare(predictions, gold, 1,
                                      index.num_categories)
        plan = make_folds(index, index.num_documents, SIMPLE, seed=0)
        via_kfold = kfold_evaluate(learner, index, plan)
        assert via_kfold.per_category == manual.per_category

    def test_threads_do_not_change_results(self):
        index = separable_corpus(n_per_cat=8)
        plan = make_folds(index, 4, SIMPLE, seed=3)
        seq = kfold_evaluate(NaiveBayesLearner(), index, plan, threads=1)
        par = kfold_evaluate(NaiveBayesLearner(), index, plan, threads=4)
        assert seq.per_category == par.per_category


class TestGridSearch:
    def test_single_point(self):
        index = separable_corpus(n_per_cat=6)
        plan = make_folds(index, 3, STRATIFIED, seed=1)
        best, table = grid_search("knn", {"k": [3]}, index, plan)
        assert best == {"k": 3}
        assert len(table) == 1

    def test_knn_k_selection_on_small_neighborhoods(self):
        # tight clusters of 3 identical docs plus a shared token; the
        # minority class is separable with k=1 (a cluster mate is always in
        # training under leave-one-out) but drowns in majority mass at k=30
        specs = [(f"alpha{i}", {f"a{i // 3}": 2, "shared": 1}, ["alpha"])
                 for i in range(6)]
        specs += [(f"beta{i}", {f"b{i // 3}": 2, "shared": 1}, ["beta"])
                  for i in range(30)]
        index = make_corpus(specs, ["alpha", "beta"])
        plan = make_folds(index, index.num_documents, SIMPLE, seed=4)
        best, table = grid_search("knn", {"k": [1, 30]}, index, plan,
                                  objective="macrof1")
        scores = dict((p["k"], s) for p, s in table)
        assert scores[1] == 1.0
        assert scores[30] < 1.0
        assert best == {"k": 1}

    def test_tie_keeps_earliest_point(self):
        index = separable_corpus(n_per_cat=6)
        plan = make_folds(index, 3, STRATIFIED, seed=1)
        best, table = grid_search("rocchio", {"beta": [16, 8]}, index, plan)
        assert [p["beta"] for p, _ in table] == [16.0, 8.0]
        assert table[0][1] == table[1][1]  # separable: both perfect
        assert best == {"beta": 16.0}

    def test_axis_order_is_cartesian_product_order(self):
        index = separable_corpus(n_per_cat=4)
        plan = make_folds(index, 2, STRATIFIED, seed=1)
        _, table = grid_search("rocchio", {"beta": [4, 2], "gamma": [1, 0]},
                               index, plan)
        assert [(p["beta"], p["gamma"]) for p, _ in table] == \
            [(4.0, 1.0), (4.0, 0.0), (2.0, 1.0), (2.0, 0.0)]

    def test_invalid_hyperparameter_value(self):
        index = separable_corpus(n_per_cat=4)
        plan = make_folds(index, 2, SIMPLE, seed=1)
        with pytest.raises(ValidationError):
            grid_search("knn", {"k": [0]}, index, plan)

    def test_empty_grid_rejected(self):
        index = separable_corpus(n_per_cat=4)
        plan = make_folds(index, 2, SIMPLE, seed=1)
        with pytest.raises(ValidationError):
            grid_search("knn", {}, index, plan)
        with pytest.raises(ValidationError):
            grid_search("knn", {"k": []}, index, plan)

    def test_unknown_objective(self):
        index = separable_corpus(n_per_cat=4)
        plan = make_folds(index, 2, SIMPLE, seed=1)
        with pytest.raises(ValidationError):
            grid_search("knn", {"k": [1]}, index, plan, objective="auc")

    def test_point_permutation_invariant_for_unique_maximum(self):
        specs = [(f"alpha{i}", {f"a{i // 3}": 2, "shared": 1}, ["alpha"])
                 for i in range(6)]
        specs += [(f"beta{i}", {f"b{i // 3}": 2, "shared": 1}, ["beta"])
                  for i in range(18)]
        index = make_corpus(specs, ["alpha", "beta"])
        plan = make_folds(index, index.num_documents, SIMPLE, seed=4)
        best_fwd, _ = grid_search("knn", {"k": [1, 30]}, index, plan)
        best_rev, _ = grid_search("knn", {"k": [30, 1]}, index, plan)
        assert best_fwd == best_rev == {"k": 1}
