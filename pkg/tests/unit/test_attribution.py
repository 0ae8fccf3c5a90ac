"""Unit tests for feature attribution and reduced feature masks."""

import math

import numpy as np
import pytest

from featurelens.analysis.attribution import (
    IMPORTANCE_HEADER,
    explain,
    gbt_importance,
    permutation_importance,
    rank_agreement,
    read_importance_csv,
    read_mask_csv,
    reduce_features,
    write_importance_csv,
    write_mask_csv,
)
from featurelens.core.errors import DimensionMismatch, SingleClassAuc, WrongModelKind
from featurelens.core.feature_names import FEATURE_NAMES, N_FEATURES
from featurelens.detectors import train


def one_informative(n: int = 60, seed: int = 0):
    """Only column 0 carries the label."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, N_FEATURES))
    y = (X[:, 0] > 0).astype(int)
    return X, y


@pytest.fixture
def gbt_model(small_config):
    X, y = one_informative()
    return train("gbt", X, y, seed=0, config=small_config), X, y


class TestGbtImportance:
    """Tests for split-statistic importance."""

    def test_informative_feature_dominates(self, gbt_model):
        """Test that every split statistic ranks the label column first."""
        model, _, _ = gbt_model
        for metric in ("gain", "cover", "weight"):
            values = gbt_importance(model, metric)
            assert values.shape == (N_FEATURES,)
            assert int(np.argmax(values)) == 0

    def test_weight_counts_splits(self, gbt_model):
        """Test that split counts add up to the ensemble's split total."""
        model, _, _ = gbt_model
        total = sum(tree.n_splits for tree in model.params.trees)
        assert gbt_importance(model, "weight").sum() == total

    def test_gain_avg_divides_by_count(self, gbt_model):
        """Test gain_avg = gain / weight, and 0 for unused features."""
        model, _, _ = gbt_model
        gain = gbt_importance(model, "gain")
        weight = gbt_importance(model, "weight")
        avg = gbt_importance(model, "gain_avg")
        used = weight > 0
        np.testing.assert_allclose(avg[used], gain[used] / weight[used])
        assert np.all(avg[~used] == 0.0)

    def test_wrong_kind(self, small_config):
        """Test that non-tree models raise WrongModelKind."""
        X, y = one_informative()
        model = train("mlp", X, y, config=small_config)
        with pytest.raises(WrongModelKind):
            gbt_importance(model)

    def test_unknown_metric(self, gbt_model):
        """Test that an unknown metric name is rejected."""
        model, _, _ = gbt_model
        with pytest.raises(ValueError, match="unknown importance metric"):
            gbt_importance(model, "entropy")

    def test_masked_model_expands_to_dictionary(self, small_config):
        """Test that a masked model's scores land at the original indices."""
        X, y = one_informative()
        mask = [i in (0, 7, 30) for i in range(N_FEATURES)]
        model = train("gbt", X[:, mask], y, config=small_config, feature_mask=mask)
        gain = gbt_importance(model)
        assert gain.shape == (N_FEATURES,)
        assert int(np.argmax(gain)) == 0
        unselected = [i for i in range(N_FEATURES) if not mask[i]]
        assert np.all(gain[unselected] == 0.0)


class TestPermutationImportance:
    """Tests for AUC-drop importance."""

    def test_label_column_has_largest_drop(self, gbt_model):
        """Test that shuffling the informative column hurts most."""
        model, X, y = gbt_model
        drops = permutation_importance(model, X, y, repeats=3, seed=1)
        assert drops.shape == (N_FEATURES,)
        assert int(np.argmax(drops)) == 0
        assert drops[0] > 0.2

    def test_deterministic(self, gbt_model):
        """Test that the same seed gives the same drops."""
        model, X, y = gbt_model
        a = permutation_importance(model, X, y, repeats=2, seed=4)
        b = permutation_importance(model, X, y, repeats=2, seed=4)
        np.testing.assert_array_equal(a, b)

    def test_single_class(self, gbt_model):
        """Test that one-class labels raise SingleClassAuc."""
        model, X, _ = gbt_model
        with pytest.raises(SingleClassAuc):
            permutation_importance(model, X, np.ones(len(X), dtype=int))

    def test_wrong_width(self, gbt_model):
        """Test that the wrong column count raises DimensionMismatch."""
        model, X, y = gbt_model
        with pytest.raises(DimensionMismatch):
            permutation_importance(model, X[:, :10], y)


class TestReduceFeatures:
    """Tests for top-k masks."""

    def test_keeps_top_k(self):
        """Test that the k largest scores are kept."""
        mask = reduce_features([0.1, 0.5, 0.3, 0.9, 0.0], k=2)
        assert mask == [False, True, False, True, False]

    def test_ties_prefer_lower_index(self):
        """Test that equal scores break toward the lower index."""
        assert reduce_features([1.0, 2.0, 2.0, 2.0], k=2) == [False, True, True, False]

    def test_default_keeps_37_of_51(self):
        """Test the default reduced size."""
        mask = reduce_features(np.arange(N_FEATURES, dtype=float))
        assert sum(mask) == 37
        assert mask[-1] and not mask[0]

    def test_nan_ranks_last(self):
        """Test that missing scores are never preferred."""
        assert reduce_features([math.nan, 0.0, -1.0], k=2) == [False, True, True]

    def test_k_out_of_range(self):
        """Test that k beyond the vector length is rejected."""
        with pytest.raises(ValueError):
            reduce_features([1.0, 2.0], k=3)


class TestRankAgreement:
    """Tests for Spearman agreement between importance vectors."""

    def test_identical(self):
        """Test perfect agreement with itself."""
        a = np.arange(20, dtype=float)
        assert rank_agreement(a, a) == pytest.approx(1.0)

    def test_reversed(self):
        """Test perfect disagreement with a reversed ordering."""
        a = np.arange(20, dtype=float)
        assert rank_agreement(a, -a) == pytest.approx(-1.0)

    def test_constant_partner_is_zero(self):
        """Test that an undefined correlation reports 0."""
        a = np.arange(20, dtype=float)
        assert rank_agreement(a, np.ones(20)) == 0.0


class TestCsvFiles:
    """Tests for importance and mask CSVs."""

    def test_importance_csv(self, gbt_model, tmp_path):
        """Test header, row order and column recovery."""
        model, X, y = gbt_model
        table = explain(model, X, y, repeats=2, seed=0)
        path = tmp_path / "importance.csv"
        write_importance_csv(table, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(IMPORTANCE_HEADER)
        assert len(lines) == N_FEATURES + 1
        assert lines[1].startswith(FEATURE_NAMES[0] + ",")
        np.testing.assert_array_equal(read_importance_csv(path, "gain"), table.gain)
        np.testing.assert_array_equal(
            read_importance_csv(path, "perm_auc_drop"), table.perm_auc_drop
        )

    def test_non_tree_columns_are_empty(self, small_config, tmp_path):
        """Test that split columns are blank for an MLP and read back as NaN."""
        X, y = one_informative()
        model = train("mlp", X, y, config=small_config)
        table = explain(model, X, y, repeats=1)
        assert table.gain is None
        path = tmp_path / "importance.csv"
        write_importance_csv(table, path)
        assert np.all(np.isnan(read_importance_csv(path, "gain")))
        assert np.all(np.isfinite(read_importance_csv(path, "perm_auc_drop")))

    def test_mask_csv(self, tmp_path):
        """Test that a mask file reloads in dictionary order."""
        mask = reduce_features(np.arange(N_FEATURES, dtype=float), k=10)
        path = tmp_path / "mask.csv"
        write_mask_csv(mask, path)
        assert path.read_text().splitlines()[0] == "feature,selected"
        assert read_mask_csv(path) == mask

    def test_mask_csv_missing_feature(self, tmp_path):
        """Test that a truncated mask file raises DimensionMismatch."""
        path = tmp_path / "mask.csv"
        path.write_text("feature,selected\nLowFreqRatio,1\n")
        with pytest.raises(DimensionMismatch):
            read_mask_csv(path)
