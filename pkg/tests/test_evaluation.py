import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arffmine import load_arff, parse_arff
from arffmine.baselines import train_zero_r
from arffmine.data import Attribute, Dataset, NOMINAL
from arffmine.evaluation import (
    FoldTrainingError,
    compute_metrics,
    cross_validate,
    stratified_folds,
)
from arffmine.trees import train_c45

from conftest import uci_path


def labeled_dataset(labels):
    classes = sorted(set(labels), key=labels.index)
    attrs = [Attribute("a", NOMINAL, 0, ("x",)),
             Attribute("class", NOMINAL, 1, tuple(classes))]
    X = np.column_stack([np.zeros(len(labels)),
                         [classes.index(l) for l in labels]]).astype(float)
    return Dataset("t", attrs, X)


class TestStratifiedFolds:
    def test_perfect_stratification(self):
        ds = labeled_dataset(["a"] * 5 + ["b"] * 5)
        folds = stratified_folds(ds, k=5, seed=1)
        codes = ds.class_codes()
        for f in range(5):
            members = codes[folds == f]
            assert sorted(members.tolist()) == [0, 1]

    def test_leave_one_out(self):
        ds = labeled_dataset(["a", "b", "a", "b", "a", "b"])
        folds = stratified_folds(ds, k=6, seed=1)
        assert sorted(np.bincount(folds).tolist()) == [1] * 6

    def test_k_out_of_range(self):
        ds = labeled_dataset(["a", "b"])
        with pytest.raises(ValueError):
            stratified_folds(ds, k=1)
        with pytest.raises(ValueError):
            stratified_folds(ds, k=3)

    def test_thyroid_per_class_balance(self):
        ds = load_arff(uci_path("thyroid-ann"))
        folds = stratified_folds(ds, k=10, seed=1)
        codes = ds.class_codes()
        for c in range(len(ds.class_attribute.values)):
            per_fold = [int(((folds == f) & (codes == c)).sum()) for f in range(10)]
            assert max(per_fold) - min(per_fold) <= 1

    @settings(deadline=None, max_examples=60)
    @given(st.lists(st.integers(0, 3), min_size=4, max_size=60),
           st.integers(2, 8), st.integers(0, 1000))
    def test_invariants_randomized(self, class_codes, k, seed):
        labels = [f"c{c}" for c in class_codes]
        ds = labeled_dataset(labels)
        if k > ds.n_instances:
            return
        folds = stratified_folds(ds, k=k, seed=seed)
        sizes = np.bincount(folds, minlength=k)
        assert sizes.sum() == ds.n_instances
        assert sizes.max() - sizes.min() <= 1
        codes = ds.class_codes()
        for c in set(codes.tolist()):
            per_fold = np.bincount(folds[codes == c], minlength=k)
            assert per_fold.max() - per_fold.min() <= 1


class TestComputeMetrics:
    def test_perfect_diagonal(self):
        m = compute_metrics(np.diag([5, 7, 3]))
        assert m["accuracy"] == 100.0
        assert np.allclose(m["precision"], 1) and np.allclose(m["recall"], 1)
        assert np.allclose(m["f1"], 1)

    def test_arithmetic_oracle(self):
        # [[50,10],[5,35]]: accuracy 85, precision0 = 50/55, recall0 = 50/60
        m = compute_metrics([[50, 10], [5, 35]])
        assert m["accuracy"] == pytest.approx(85.0)
        assert m["precision"][0] == pytest.approx(50 / 55, abs=1e-4)
        assert m["precision"][0] == pytest.approx(0.9091, abs=1e-4)
        assert m["recall"][0] == pytest.approx(50 / 60)
        p, r = 50 / 55, 50 / 60
        assert m["f1"][0] == pytest.approx(2 * p * r / (p + r))

    def test_empty_predicted_column(self):
        m = compute_metrics([[3, 0], [2, 0]])
        assert m["precision"][1] == 0.0
        assert m["f1"][1] == 0.0


class TestCrossValidate:
    def test_zero_r_single_column(self):
        ds = labeled_dataset(["a"] * 12 + ["b"] * 6)
        report = cross_validate(lambda d, s, c: train_zero_r(d), ds, k=6)
        nonzero_cols = (report.confusion.sum(axis=0) > 0).sum()
        assert nonzero_cols == 1
        assert report.confusion.sum() == 18

    def test_every_instance_predicted_once(self, weather):
        report = cross_validate(lambda d, s, c: train_c45(d), weather, k=7)
        assert report.confusion.sum() == weather.n_instances

    def test_deterministic(self, weather):
        a = cross_validate(lambda d, s, c: train_c45(d), weather, k=7, seed=3)
        b = cross_validate(lambda d, s, c: train_c45(d), weather, k=7, seed=3)
        assert np.array_equal(a.confusion, b.confusion)
        assert a.model_text == b.model_text

    def test_accuracy_matches_matrix(self, weather):
        report = cross_validate(lambda d, s, c: train_c45(d), weather, k=7)
        assert report.accuracy == pytest.approx(
            100.0 * np.trace(report.confusion) / report.confusion.sum())

    def test_training_failure_carries_fold_index(self, weather):
        def bad_trainer(d, s, c):
            raise RuntimeError("boom")

        with pytest.raises(FoldTrainingError, match="fold 0"):
            cross_validate(bad_trainer, weather, k=7)

    def test_derived_fold_seeds(self, weather):
        seeds = []

        def recording_trainer(d, s, c):
            seeds.append(s)
            return train_zero_r(d)

        cross_validate(recording_trainer, weather, k=7, seed=100)
        assert seeds == [100 + f for f in range(7)] + [100]

    def test_timing_fields_present(self, weather):
        report = cross_validate(lambda d, s, c: train_c45(d), weather, k=7)
        assert report.build_time_s > 0
        assert report.cv_time_s > 0
