import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascadesdp.datasets import Dataset
from cascadesdp.learners import (
    ClassifierSpec,
    KernelNaiveBayes,
    Kind,
    KNearestNeighbors,
    bagging_spec,
    dt_spec,
    fit,
    knn_spec,
    model_label,
    nb_spec,
    predict,
    predict_proba,
)


def toy_dataset(X, y, name="toy"):
    X = np.asarray(X, dtype=float)
    names = tuple(f"f{i}" for i in range(X.shape[1]))
    return Dataset(name, X, np.asarray(y), names)


@st.composite
def grid_datasets(draw, max_n=24, max_p=4, grid=12):
    """Small integer-grid datasets with both classes present."""
    n = draw(st.integers(4, max_n))
    p = draw(st.integers(1, max_p))
    X = np.array(
        draw(
            st.lists(
                st.lists(st.integers(0, grid), min_size=p, max_size=p),
                min_size=n,
                max_size=n,
            )
        ),
        dtype=float,
    )
    y = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    y[0], y[1] = 0, 1
    return toy_dataset(X, y)


class TestSpecs:
    def test_defaults_follow_standard_settings(self):
        assert dict(dt_spec().params) == {"confidence": 0.25, "min_obj": 2, "prune": True}
        assert knn_spec().params["k"] == 1
        assert bagging_spec(nb_spec()).params["members"] == 10

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            knn_spec(k=0)
        with pytest.raises(ValueError):
            dt_spec(confidence=0.0)
        with pytest.raises(ValueError):
            dt_spec(confidence=0.6)
        with pytest.raises(ValueError):
            dt_spec(min_obj=0)
        with pytest.raises(ValueError):
            ClassifierSpec(Kind.KNN, {"neighbours": 3})
        with pytest.raises(ValueError):
            bagging_spec(nb_spec(), members=0)

    def test_labels(self):
        assert model_label(nb_spec()) == "NB"
        assert model_label(bagging_spec(knn_spec())) == "Bg-KNN"

    def test_single_class_training_rejected(self):
        X = np.array([[0.0], [1.0]])
        with pytest.raises(ValueError, match="both classes"):
            Dataset("bad", X, np.array([1, 1]), ("f0",))


class TestKernelNaiveBayes:
    def test_four_point_hand_computed_posterior(self):
        # independent recomputation with plain-math loops
        train = {0: [0.0, 0.1], 1: [1.0, 1.1]}
        query = 0.05
        total = 4
        log_joint = []
        for cls in (0, 1):
            values = train[cls]
            n = len(values)
            mu = sum(values) / n
            var = sum((v - mu) ** 2 for v in values) / n
            h = max(1.06 * math.sqrt(var) * n ** (-1 / 5), 1e-6)
            density = sum(
                math.exp(-0.5 * ((query - u) / h) ** 2) for u in values
            ) / (n * h * math.sqrt(2 * math.pi))
            log_joint.append(math.log((n + 1) / (total + 2)) + math.log(density))
        top = max(log_joint)
        expected = [math.exp(v - top) for v in log_joint]
        norm = sum(expected)
        expected = [v / norm for v in expected]

        d = toy_dataset([[0.0], [0.1], [1.0], [1.1]], [0, 0, 1, 1])
        model = fit(nb_spec(), d)
        probs = predict_proba(model, np.array([query]))
        assert probs[0] > 0.99
        np.testing.assert_allclose(probs, expected, atol=1e-9)

    def test_constant_feature_is_uninformative(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 3))
        y = (X[:, 0] + 0.3 * rng.normal(size=30) > 0).astype(int)
        y[0], y[1] = 0, 1
        with_const = np.column_stack([X, np.full(30, 7.0)])
        base = KernelNaiveBayes().fit(X, y)
        extended = KernelNaiveBayes().fit(with_const, y)
        queries = rng.normal(size=(20, 3))
        q_ext = np.column_stack([queries, np.full(20, 7.0)])
        np.testing.assert_allclose(
            base.predict_proba(queries), extended.predict_proba(q_ext), atol=1e-9
        )

    def test_symmetric_classes_give_half(self):
        # identical per-class distributions and equal priors
        d = toy_dataset([[1.0], [2.0], [1.0], [2.0]], [0, 0, 1, 1])
        model = fit(nb_spec(), d)
        np.testing.assert_allclose(
            model.predict_proba(np.array([[1.5]])), [[0.5, 0.5]], atol=1e-12
        )

    @given(grid_datasets(), st.permutations(range(4)))
    @settings(max_examples=40)
    def test_feature_permutation_invariance(self, d, perm):
        perm = [p for p in perm if p < d.n_features]
        if len(perm) != d.n_features:
            perm = list(range(d.n_features))
        model = KernelNaiveBayes().fit(d.features, d.labels)
        permuted = KernelNaiveBayes().fit(d.features[:, perm], d.labels)
        q = d.features[: min(8, d.n_instances)]
        np.testing.assert_allclose(
            model.predict_proba(q), permuted.predict_proba(q[:, perm]), atol=1e-9
        )

    def test_far_queries_never_nan(self):
        d = toy_dataset([[0.0, 1.0], [0.1, 1.0], [5.0, 2.0], [5.1, 2.0]], [0, 0, 1, 1])
        model = fit(nb_spec(), d)
        extreme = np.array([[1e9, -1e9], [-3e8, 2e8], [1e300, -1e300]])
        probs = model.predict_proba(extreme)
        assert np.isfinite(probs).all()
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)


class TestKNearestNeighbors:
    def test_one_nn_basic(self):
        d = toy_dataset([[0.0, 0.0], [10.0, 10.0]], [0, 1])
        model = fit(knn_spec(), d)
        np.testing.assert_allclose(
            model.predict_proba(np.array([[1.0, 1.0]])), [[1.0, 0.0]]
        )

    def test_training_points_predict_their_own_label(self):
        d = toy_dataset([[0.0], [1.0], [2.0], [3.0]], [0, 0, 1, 1])
        model = fit(knn_spec(), d)
        labels = (model.predict_proba(d.features)[:, 1] > 0.5).astype(int)
        np.testing.assert_array_equal(labels, d.labels)

    def test_equidistant_tie_breaks_to_lower_training_index(self):
        # the query sits exactly between rows 0 (class 1) and 1 (class 0)
        d = toy_dataset([[0.0], [2.0], [9.0], [9.5]], [1, 0, 0, 1])
        model = fit(knn_spec(), d)
        assert predict(model, np.array([1.0])) == 1
        swapped = toy_dataset([[0.0], [2.0], [9.0], [9.5]], [0, 1, 0, 1])
        assert predict(fit(knn_spec(), swapped), np.array([1.0])) == 0

    def test_tied_vote_breaks_to_class_zero(self):
        d = toy_dataset([[0.0], [1.0], [10.0], [11.0]], [0, 1, 0, 1])
        model = fit(knn_spec(k=2), d)
        probs = predict_proba(model, np.array([0.5]))
        np.testing.assert_allclose(probs, [0.5, 0.5])
        assert predict(model, np.array([0.5])) == 0

    @given(grid_datasets(max_n=50, max_p=3))
    @settings(max_examples=40)
    def test_matches_brute_force_scan(self, d):
        model = KNearestNeighbors(k=1).fit(d.features, d.labels)
        mins = d.features.min(axis=0)
        ranges = d.features.max(axis=0) - mins
        scale = np.where(ranges > 0, 1.0 / np.where(ranges > 0, ranges, 1.0), 0.0)
        queries = np.array(
            [[v + 0.5 for v in row] for row in d.features[:12]]
            + [[-1.0] * d.n_features, [20.0] * d.n_features]
        )
        got = (model.predict_proba(queries)[:, 1] > 0.5).astype(int)
        for q, g in zip(queries, got):
            best_i, best_d = 0, None
            for i, row in enumerate(d.features):
                dist = sum(((q[j] - row[j]) * scale[j]) ** 2 for j in range(d.n_features))
                if best_d is None or dist < best_d:
                    best_i, best_d = i, dist
            assert g == d.labels[best_i]

    @given(grid_datasets(max_n=20, max_p=3), st.sampled_from([0.5, 2.0, 4.0]),
           st.integers(-5, 5))
    @settings(max_examples=30)
    def test_affine_rescaling_invariance(self, d, a, b):
        # power-of-two scale and integer shift keep float arithmetic exact
        model = KNearestNeighbors(k=1).fit(d.features, d.labels)
        rescaled = KNearestNeighbors(k=1).fit(a * d.features + b, d.labels)
        queries = d.features[:10] + 0.25
        np.testing.assert_array_equal(
            model.predict_proba(queries), rescaled.predict_proba(a * queries + b)
        )

    def test_zero_range_feature_contributes_nothing(self):
        d = toy_dataset([[0.0, 5.0], [1.0, 5.0], [10.0, 5.0]], [0, 0, 1])
        model = fit(knn_spec(), d)
        narrowed = toy_dataset([[0.0], [1.0], [10.0]], [0, 0, 1])
        narrow_model = fit(knn_spec(), narrowed)
        queries2 = np.array([[4.0, -100.0], [8.0, 3.0]])
        np.testing.assert_array_equal(
            model.predict_proba(queries2), narrow_model.predict_proba(queries2[:, :1])
        )


class TestContract:
    @given(grid_datasets())
    @settings(max_examples=30)
    def test_distributions_are_valid_for_all_learners(self, d):
        queries = np.vstack([d.features[:6], d.features[:2] + 100.0])
        for spec in (nb_spec(), dt_spec(), knn_spec()):
            model = fit(spec, d)
            probs = model.predict_proba(queries)
            assert probs.shape == (len(queries), 2)
            assert (probs >= 0).all() and (probs <= 1).all()
            np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
            assert np.isfinite(probs).all()

    def test_two_point_training_accuracy(self):
        # minimum-size separable set; DT needs min_obj=1 to be able to split
        d = toy_dataset([[0.0, 3.0], [4.0, 1.0]], [0, 1])
        for spec in (nb_spec(), dt_spec(min_obj=1), knn_spec()):
            model = fit(spec, d)
            labels = (model.predict_proba(d.features)[:, 1] > 0.5).astype(int)
            np.testing.assert_array_equal(labels, d.labels)

    def test_width_mismatch_rejected(self):
        d = toy_dataset([[0.0, 1.0], [1.0, 0.0]], [0, 1])
        for spec in (nb_spec(), dt_spec(), knn_spec()):
            model = fit(spec, d)
            with pytest.raises(ValueError):
                model.predict_proba(np.array([[1.0, 2.0, 3.0]]))

    def test_predict_tie_break_rule(self):
        d = toy_dataset([[0.0], [1.0], [10.0], [11.0]], [0, 1, 0, 1])
        model = fit(knn_spec(k=2), d)
        assert predict(model, np.array([0.5])) == 0  # (0.5, 0.5) -> class 0
        strong = fit(knn_spec(), toy_dataset([[0.0], [10.0]], [0, 1]))
        assert predict(strong, np.array([9.0])) == 1  # (0.0, 1.0) -> class 1
