import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascadesdp.datasets import (
    Dataset,
    DatasetFormatError,
    dataset_stats,
    load_arff,
    load_csv,
    stratified_folds,
    write_arff,
    write_csv,
)
from cascadesdp.synthetic import make_synthetic_dataset

MINIMAL_ARFF = """\
% tiny but valid
@relation tiny
@attribute loc numeric
@attribute branches numeric
@attribute Defective {N,Y}
@data
1.5,2,N
3.25,7,Y
"""


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadArff:
    def test_minimal_two_row_file(self, tmp_path):
        d = load_arff(write(tmp_path / "tiny.arff", MINIMAL_ARFF))
        assert d.n_instances == 2
        assert d.n_features == 2
        assert d.feature_names == ("loc", "branches")
        assert list(d.labels) == [0, 1]
        assert d.class_names == ("N", "Y")
        np.testing.assert_array_equal(d.features, [[1.5, 2.0], [3.25, 7.0]])

    def test_three_valued_class_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("{N,Y}", "{N,Y,maybe}")
        with pytest.raises(DatasetFormatError, match="cardinality"):
            load_arff(write(tmp_path / "bad.arff", text))

    def test_missing_value_token_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("1.5,2,N", "?,2,N")
        with pytest.raises(DatasetFormatError, match=r"\?"):
            load_arff(write(tmp_path / "missing.arff", text))

    def test_non_numeric_predictor_value_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("1.5,2,N", "high,2,N")
        with pytest.raises(DatasetFormatError, match="non-numeric"):
            load_arff(write(tmp_path / "nonnum.arff", text))

    def test_nominal_predictor_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("@attribute loc numeric", "@attribute loc {a,b}")
        with pytest.raises(DatasetFormatError):
            load_arff(write(tmp_path / "nominal.arff", text))

    def test_defective_synonyms_map_to_index_one(self, tmp_path):
        for positive, negative in (("Y", "N"), ("yes", "no"), ("true", "false"), ("1", "0")):
            text = MINIMAL_ARFF.replace("{N,Y}", f"{{{positive},{negative}}}")
            text = text.replace(",N\n", f",{negative}\n").replace(",Y\n", f",{positive}\n")
            d = load_arff(write(tmp_path / f"{positive}.arff", text))
            assert d.class_names[1] == positive
            assert list(d.labels) == [0, 1]

    def test_unidentifiable_positive_class_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("{N,Y}", "{clean,buggy}")
        text = text.replace(",N\n", ",clean\n").replace(",Y\n", ",buggy\n")
        with pytest.raises(DatasetFormatError, match="defective"):
            load_arff(write(tmp_path / "odd.arff", text))

    def test_infinite_value_rejected(self, tmp_path):
        text = MINIMAL_ARFF.replace("1.5", "inf")
        with pytest.raises(DatasetFormatError, match="non-finite"):
            load_arff(write(tmp_path / "inf.arff", text))


class TestLoadCsv:
    def test_basic(self, tmp_path):
        d = load_csv(write(tmp_path / "t.csv", "a,b,label\n1,2,N\n3,4,Y\n"))
        assert d.n_instances == 2 and d.n_features == 2
        assert list(d.labels) == [0, 1]

    def test_header_only_is_no_instances(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="no instances"):
            load_csv(write(tmp_path / "h.csv", "a,b,label\n"))

    def test_third_label_value_rejected(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="cardinality"):
            load_csv(write(tmp_path / "t3.csv", "a,label\n1,N\n2,Y\n3,whoops\n"))

    def test_ragged_row_rejected(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="ragged"):
            load_csv(write(tmp_path / "r.csv", "a,b,label\n1,2,N\n3,Y\n"))

    def test_unknown_label_column_rejected(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="unknown label column"):
            load_csv(write(tmp_path / "u.csv", "a,b,label\n1,2,N\n3,4,Y\n"), label_column="bug")

    def test_label_column_by_name(self, tmp_path):
        d = load_csv(
            write(tmp_path / "mid.csv", "a,bug,b\n1,N,2\n3,Y,4\n"), label_column="bug"
        )
        assert d.feature_names == ("a", "b")
        np.testing.assert_array_equal(d.features, [[1, 2], [3, 4]])

    def test_arff_and_csv_of_same_table_are_equal(self, tmp_path):
        d = make_synthetic_dataset("pair", 40, 6, 12, seed=3)
        write_arff(d, tmp_path / "pair.arff")
        write_csv(d, tmp_path / "pair.csv")
        from_arff = load_arff(tmp_path / "pair.arff")
        from_csv = load_csv(tmp_path / "pair.csv")
        assert from_arff.equal_contents(from_csv)
        np.testing.assert_array_equal(from_arff.labels, from_csv.labels)


class TestRoundTrip:
    @given(seed=st.integers(0, 10_000), n=st.integers(4, 60), attrs=st.integers(2, 9))
    @settings(max_examples=30)
    def test_csv_round_trip_exact(self, tmp_path_factory, seed, n, attrs):
        d = make_synthetic_dataset("rt", n, attrs, max(1, n // 3), seed=seed)
        path = tmp_path_factory.mktemp("rt") / "rt.csv"
        write_csv(d, path)
        again = load_csv(path)
        assert again.equal_contents(d)

    def test_arff_round_trip_exact(self, tmp_path):
        d = make_synthetic_dataset("rt2", 50, 8, 17, seed=9)
        write_arff(d, tmp_path / "rt2.arff")
        assert load_arff(tmp_path / "rt2.arff").equal_contents(d)


class TestDatasetInvariants:
    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="both classes"):
            Dataset("x", np.zeros((3, 2)), np.array([1, 1, 1]), ("a", "b"))

    def test_nan_rejected(self):
        feats = np.array([[np.nan, 1.0], [2.0, 3.0]])
        with pytest.raises(ValueError, match="non-finite"):
            Dataset("x", feats, np.array([0, 1]), ("a", "b"))

    def test_duplicate_feature_names_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            Dataset("x", np.zeros((2, 2)), np.array([0, 1]), ("a", "a"))

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            Dataset("x", np.zeros((1, 2)), np.array([1]), ("a", "b"))


class TestStats:
    def test_two_row_synthetic(self, tmp_path):
        d = load_arff(write(tmp_path / "tiny.arff", MINIMAL_ARFF))
        meta = dataset_stats(d)
        assert meta.as_row() == ("tiny", 2, 3, 1, 1)

    def test_counts_are_consistent(self):
        d = make_synthetic_dataset("s", 101, 12, 33, seed=2)
        meta = dataset_stats(d)
        assert meta.instances == 101
        assert meta.attributes == 12  # includes the class attribute
        assert meta.defective == 33
        assert meta.defective + meta.non_defective == meta.instances

    @given(
        n=st.integers(5, 80),
        attrs=st.integers(2, 8),
        frac=st.floats(0.1, 0.9),
        seed=st.integers(0, 999),
    )
    @settings(max_examples=25)
    def test_defective_plus_clean_equals_instances(self, n, attrs, frac, seed):
        defective = min(n - 1, max(1, int(n * frac)))
        meta = dataset_stats(make_synthetic_dataset("p", n, attrs, defective, seed=seed))
        assert meta.defective + meta.non_defective == meta.instances == n


class TestStratifiedFolds:
    def test_exact_divisibility_one_per_class(self):
        feats = np.arange(20, dtype=float).reshape(10, 2)
        d = Dataset("ten", feats, np.array([0, 1] * 5), ("a", "b"))
        plan = stratified_folds(d, 5, seed=0)
        for fold in plan.folds:
            labels = d.labels[fold]
            assert labels.sum() == 1 and len(labels) == 2

    def test_determinism(self):
        d = make_synthetic_dataset("det", 57, 6, 19, seed=4)
        a = stratified_folds(d, 7, seed=123)
        b = stratified_folds(d, 7, seed=123)
        for fa, fb in zip(a.folds, b.folds):
            np.testing.assert_array_equal(fa, fb)
        c = stratified_folds(d, 7, seed=124)
        assert any(not np.array_equal(fa, fc) for fa, fc in zip(a.folds, c.folds))

    def test_cm1_shaped_minority_counts(self):
        # 42 minority over 10 folds: integer-division bounds give 4 or 5 each
        d = make_synthetic_dataset("cm1ish", 327, 38, 42, seed=5)
        plan = stratified_folds(d, 10, seed=77)
        minority = sorted(int(d.labels[f].sum()) for f in plan.folds)
        assert set(minority) <= {4, 5}
        assert sum(minority) == 42
        assert minority.count(5) == 2

    def test_k_above_instance_count_rejected(self):
        d = make_synthetic_dataset("small", 12, 4, 4, seed=0)
        with pytest.raises(ValueError, match="exceeds"):
            stratified_folds(d, 13, seed=0)
        with pytest.raises(ValueError, match="at least 2"):
            stratified_folds(d, 1, seed=0)

    @given(
        n=st.integers(6, 120),
        frac=st.floats(0.15, 0.85),
        k=st.integers(2, 10),
        seed=st.integers(0, 2**40),
    )
    @settings(max_examples=60)
    def test_partition_and_stratification_invariants(self, n, frac, k, seed):
        defective = min(n - 1, max(1, int(n * frac)))
        d = make_synthetic_dataset("inv", n, 3, defective, seed=seed)
        k = min(k, n)
        plan = stratified_folds(d, k, seed=seed)
        pooled = np.concatenate(plan.folds)
        np.testing.assert_array_equal(np.sort(pooled), np.arange(n))
        sizes = [len(f) for f in plan.folds]
        assert max(sizes) - min(sizes) <= 1
        for cls in (0, 1):
            per_fold = [int((d.labels[f] == cls).sum()) for f in plan.folds]
            assert max(per_fold) - min(per_fold) <= 1
