import numpy as np
import pytest

from rocqe import (
    BootstrapConfig,
    ConfidenceBand,
    Dataset,
    DegenerateClassError,
    band_width_summary,
    build_roc,
    confidence_band,
    map_replicates,
    replicate_rng,
    resample_stratified,
)
from rocqe.bootstrap import curve_arrays, nearest_rank, resample_arrays, trapezoid_auc
from rocqe.roc import auc
from helpers import assert_close, make_dataset, random_dataset


class TestBootstrapConfig:
    def test_defaults(self):
        cfg = BootstrapConfig()
        assert cfg.iterations == 1000
        assert cfg.confidence == 0.95
        assert cfg.seed == 0
        assert cfg.grid_points is None
        assert cfg.workers == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"iterations": 1},
            {"confidence": 0.0},
            {"confidence": 1.0},
            {"seed": -1},
            {"seed": 2**64},
            {"grid_points": 0},
            {"workers": 0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            BootstrapConfig(**kwargs)

    def test_grid_tracks_negative_count(self):
        grid = BootstrapConfig().fpr_grid(250)
        assert grid.size == 251
        assert grid[0] == 0.0 and grid[-1] == 1.0

    def test_grid_floors_at_hundred_intervals(self):
        assert BootstrapConfig().fpr_grid(4).size == 101

    def test_explicit_grid_points(self):
        grid = BootstrapConfig(grid_points=4).fpr_grid(999)
        assert np.array_equal(grid, [0.0, 0.25, 0.5, 0.75, 1.0])


class TestReplicateRng:
    def test_same_index_same_stream(self):
        a = replicate_rng(7, 3).integers(0, 1000, size=20)
        b = replicate_rng(7, 3).integers(0, 1000, size=20)
        assert np.array_equal(a, b)

    def test_different_index_different_stream(self):
        a = replicate_rng(7, 3).integers(0, 1000, size=20)
        b = replicate_rng(7, 4).integers(0, 1000, size=20)
        assert not np.array_equal(a, b)

    def test_different_seed_different_stream(self):
        a = replicate_rng(7, 3).integers(0, 1000, size=20)
        b = replicate_rng(8, 3).integers(0, 1000, size=20)
        assert not np.array_equal(a, b)


class TestResampling:
    def test_arrays_keep_stratum_sizes_and_values(self):
        rng = np.random.default_rng(1)
        pos = np.array([1.0, 2.0, 3.0])
        neg = np.array([-1.0, -2.0])
        rpos, rneg = resample_arrays(pos, neg, rng)
        assert rpos.size == 3 and rneg.size == 2
        assert set(rpos) <= set(pos) and set(rneg) <= set(neg)

    def test_positives_drawn_before_negatives(self):
        # Draw order is observable: the first stream draws pick the positives.
        pos = np.arange(5, dtype=float)
        neg = np.arange(3, dtype=float)
        rpos, _ = resample_arrays(pos, neg, replicate_rng(0, 0))
        expected = pos[replicate_rng(0, 0).integers(0, 5, size=5)]
        assert np.array_equal(rpos, expected)

    def test_stratified_dataset_roundtrip(self, sample10):
        out = resample_stratified(sample10, replicate_rng(3, 0))
        assert isinstance(out, Dataset)
        assert out.p_count == sample10.p_count
        assert out.n_count == sample10.n_count
        assert out.orientation is sample10.orientation
        originals = {s.segment_id for s in sample10.segments}
        assert {s.segment_id for s in out.segments} <= originals

    def test_stratified_is_deterministic(self, sample10):
        a = resample_stratified(sample10, replicate_rng(3, 5))
        b = resample_stratified(sample10, replicate_rng(3, 5))
        assert [s.segment_id for s in a.segments] == [s.segment_id for s in b.segments]

    def test_single_member_strata_resample_to_themselves(self):
        ds = make_dataset([1.0, 0.0], [True, False])
        out = resample_stratified(ds, replicate_rng(0, 0))
        assert sorted(s.risk_score for s in out.segments) == [0.0, 1.0]

    def test_degenerate_rejected(self):
        ds = make_dataset([1.0, 2.0], [True, True])
        with pytest.raises(DegenerateClassError):
            resample_stratified(ds, replicate_rng(0, 0))


class TestMapReplicates:
    def test_results_in_index_order(self, sample10):
        cfg = BootstrapConfig(iterations=16, seed=5)
        ids = map_replicates(sample10, cfg, lambda p, n: (p.sum(), n.sum()))
        again = map_replicates(sample10, cfg, lambda p, n: (p.sum(), n.sum()))
        assert ids == again

    def test_parallel_matches_serial(self, sample10):
        serial = map_replicates(
            sample10, BootstrapConfig(iterations=32, seed=5, workers=1), lambda p, n: p.tolist()
        )
        parallel = map_replicates(
            sample10, BootstrapConfig(iterations=32, seed=5, workers=4), lambda p, n: p.tolist()
        )
        assert serial == parallel


class TestCurveArrays:
    def test_matches_build_roc_coordinates(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            ds = random_dataset(rng)
            fpr, tpr = curve_arrays(ds.positive_risks, ds.negative_risks)
            curve = build_roc(ds)
            assert np.array_equal(fpr, curve.fpr)
            assert np.array_equal(tpr, curve.tpr)

    def test_trapezoid_matches_vertex_auc(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            ds = random_dataset(rng)
            fpr, tpr = curve_arrays(ds.positive_risks, ds.negative_risks)
            assert_close(trapezoid_auc(fpr, tpr), auc(build_roc(ds)))


class TestNearestRank:
    def test_small_vector(self):
        values = np.array([10.0, 20.0, 30.0, 40.0])
        assert nearest_rank(values, 0.025) == 10.0
        assert nearest_rank(values, 0.5) == 20.0
        assert nearest_rank(values, 0.975) == 40.0
        assert nearest_rank(values, 1.0) == 40.0

    def test_thousand_values_cut_at_25_and_975(self):
        values = np.arange(1.0, 1001.0)
        assert nearest_rank(values, 0.025) == 25.0
        assert nearest_rank(values, 0.975) == 975.0

    def test_matrix_selects_rows(self):
        matrix = np.sort(np.arange(12.0).reshape(4, 3), axis=0)
        assert np.array_equal(nearest_rank(matrix, 0.5), matrix[1])


class TestConfidenceBand:
    def test_identical_runs(self, sample10):
        cfg = BootstrapConfig(iterations=100, seed=13)
        assert confidence_band(sample10, cfg) == confidence_band(sample10, cfg)

    def test_parallel_matches_serial(self, sample10):
        a = confidence_band(sample10, BootstrapConfig(iterations=100, seed=13, workers=1))
        b = confidence_band(sample10, BootstrapConfig(iterations=100, seed=13, workers=4))
        assert a == b

    def test_seed_changes_band(self, sample10):
        a = confidence_band(sample10, BootstrapConfig(iterations=100, seed=13))
        b = confidence_band(sample10, BootstrapConfig(iterations=100, seed=14))
        assert a != b

    def test_perfect_separation_pins_band(self):
        ds = make_dataset([4.0, 3.0, 2.0, 1.0], [True, True, False, False])
        band = confidence_band(ds, BootstrapConfig(iterations=50, seed=1))
        assert band.auc_point == 1.0
        assert band.auc_interval == (1.0, 1.0)
        assert np.array_equal(band.lower_tpr, band.upper_tpr)
        assert np.array_equal(band.lower_tpr, band.point_tpr)
        summary = band_width_summary(band)
        assert summary.max_width == 0.0 and summary.mean_width == 0.0

    def test_band_contains_no_inversions_and_is_monotone(self, sample10):
        band = confidence_band(sample10, BootstrapConfig(iterations=200, seed=2))
        assert np.all(band.lower_tpr <= band.upper_tpr)
        assert np.all(np.diff(band.lower_tpr) >= 0)
        assert np.all(np.diff(band.upper_tpr) >= 0)
        assert np.all(np.diff(band.point_tpr) >= 0)

    def test_grid_spans_unit_interval(self, sample10):
        band = confidence_band(sample10, BootstrapConfig(iterations=10, seed=0))
        assert band.fpr_grid[0] == 0.0 and band.fpr_grid[-1] == 1.0
        assert band.fpr_grid.size == 101

    def test_wider_confidence_nests(self, sample10):
        narrow = confidence_band(sample10, BootstrapConfig(iterations=300, seed=3, confidence=0.9))
        wide = confidence_band(sample10, BootstrapConfig(iterations=300, seed=3, confidence=0.99))
        assert np.all(wide.lower_tpr <= narrow.lower_tpr)
        assert np.all(narrow.upper_tpr <= wide.upper_tpr)
        assert wide.auc_interval[0] <= narrow.auc_interval[0]
        assert narrow.auc_interval[1] <= wide.auc_interval[1]

    def test_point_curve_is_empirical_curve_on_grid(self, sample10):
        from rocqe.roc import curve_tpr_at

        band = confidence_band(sample10, BootstrapConfig(iterations=10, seed=0))
        curve = build_roc(sample10)
        assert np.allclose(band.point_tpr, np.asarray(curve_tpr_at(curve, band.fpr_grid)))
        assert_close(band.auc_point, auc(curve))

    def test_all_tied_scores_degenerate_every_replicate(self):
        ds = make_dataset([2.0] * 6, [True, False, True, False, True, False])
        band = confidence_band(ds, BootstrapConfig(iterations=40, seed=7))
        assert band.degenerate_replicates == 40
        assert np.allclose(band.lower_tpr, band.fpr_grid)
        assert np.allclose(band.upper_tpr, band.fpr_grid)
        assert band.auc_interval == (0.5, 0.5)

    def test_tiny_stratum_warns(self):
        ds = make_dataset([3.0, 1.0, 0.5], [True, False, False])
        with pytest.warns(UserWarning, match="stratum"):
            confidence_band(ds, BootstrapConfig(iterations=10, seed=0))

    def test_arrays_are_read_only(self, sample10):
        band = confidence_band(sample10, BootstrapConfig(iterations=10, seed=0))
        with pytest.raises(ValueError):
            band.lower_tpr[0] = 0.5

    def test_degenerate_dataset_rejected(self):
        ds = make_dataset([1.0, 2.0], [True, True])
        with pytest.raises(DegenerateClassError):
            confidence_band(ds, BootstrapConfig(iterations=10, seed=0))


class TestBandValidation:
    def test_inverted_band_rejected(self):
        grid = np.linspace(0, 1, 3)
        with pytest.raises(ValueError, match="inverted"):
            ConfidenceBand(
                fpr_grid=grid,
                lower_tpr=np.array([0.0, 0.9, 1.0]),
                upper_tpr=np.array([0.0, 0.5, 1.0]),
                point_tpr=grid.copy(),
                auc_point=0.5,
                auc_interval=(0.4, 0.6),
                confidence=0.95,
                iterations=10,
                seed=0,
                degenerate_replicates=0,
            )

    def test_inverted_auc_interval_rejected(self):
        grid = np.linspace(0, 1, 3)
        with pytest.raises(ValueError, match="auc_interval"):
            ConfidenceBand(
                fpr_grid=grid,
                lower_tpr=grid.copy(),
                upper_tpr=grid.copy(),
                point_tpr=grid.copy(),
                auc_point=0.5,
                auc_interval=(0.6, 0.4),
                confidence=0.95,
                iterations=10,
                seed=0,
                degenerate_replicates=0,
            )


class TestWidthShrinksWithSampleSize:
    def test_quadrupling_roughly_halves_mean_width(self):
        # Binormal scores; quadrupling both strata should shrink the band
        # by about sqrt(4) = 2. Averaged over seeds to damp resample noise.
        ratios = []
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            small = _binormal(rng, 30)
            large = _binormal(rng, 120)
            cfg = lambda: BootstrapConfig(iterations=150, seed=seed)
            w_small = band_width_summary(confidence_band(small, cfg())).mean_width
            w_large = band_width_summary(confidence_band(large, cfg())).mean_width
            ratios.append(w_small / w_large)
        mean_ratio = float(np.mean(ratios))
        assert 1.5 <= mean_ratio <= 3.0, mean_ratio


def _binormal(rng: np.random.Generator, per_class: int) -> Dataset:
    pos = rng.normal(1.0, 1.0, size=per_class)
    neg = rng.normal(0.0, 1.0, size=per_class)
    risks = np.concatenate([pos, neg])
    labels = [True] * per_class + [False] * per_class
    return make_dataset([float(r) for r in risks], labels)
