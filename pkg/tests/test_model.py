import numpy as np
import pytest

from fdsched.model import (
    GainTable,
    Pairing,
    ScenarioParams,
    WeightMode,
    dbm_to_watts,
    validate_gain_table,
    validate_params,
    watts_to_dbm,
)


class TestUnitConversions:
    def test_dbm_to_watts_reference_points(self):
        assert dbm_to_watts(30.0) == pytest.approx(1.0, abs=0)
        assert dbm_to_watts(24.0) == pytest.approx(0.251188643150958, abs=1e-4)
        assert dbm_to_watts(-116.4) == pytest.approx(2.29086765276777e-15, abs=1e-18)

    def test_round_trip(self):
        for x in np.linspace(-150.0, 50.0, 401):
            assert watts_to_dbm(dbm_to_watts(x)) == pytest.approx(x, abs=1e-9)


class TestValidateParams:
    def test_defaults_are_valid(self):
        report = validate_params(ScenarioParams(num_ul=4, num_dl=4, num_channels=4, mu=0.5))
        assert report.ok
        assert str(report) == "OK"

    def test_too_many_ul_users(self):
        report = validate_params(ScenarioParams(num_ul=5, num_dl=4, num_channels=4))
        assert not report.ok
        assert any("num_ul" in v for v in report.violations)

    def test_mu_out_of_range(self):
        report = validate_params(ScenarioParams(mu=1.2))
        assert not report.ok
        assert any("mu" in v for v in report.violations)

    def test_multiple_violations_all_reported(self):
        report = validate_params(ScenarioParams(num_ul=9, num_channels=4, mu=-0.1,
                                                cell_radius_m=-1.0))
        assert len(report.violations) >= 3

    def test_weight_mode_keys(self):
        assert WeightMode.from_key("SR") is WeightMode.SUM_RATE
        assert WeightMode.from_key("PL") is WeightMode.PATH_LOSS_COMPENSATION
        with pytest.raises(ValueError):
            WeightMode.from_key("XX")


class TestPairing:
    def test_views_are_symmetric(self):
        p = Pairing.from_ul_partners([2, None, 0], num_dl=3)
        assert p.partner_of_dl == (2, None, 0)
        assert p.num_pairs == 2
        assert p.pairs() == [(0, 2), (2, 0)]

    def test_duplicate_partner_rejected(self):
        with pytest.raises(ValueError):
            Pairing.from_ul_partners([1, 1], num_dl=2)

    def test_inconsistent_views_rejected(self):
        with pytest.raises(ValueError):
            Pairing(partner_of_ul=(0,), partner_of_dl=(None,))

    def test_matrix_row_and_column_sums(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            num_ul = rng.integers(1, 6)
            num_dl = rng.integers(1, 6)
            dl_pool = list(rng.permutation(num_dl))
            partners = []
            for _ in range(num_ul):
                partners.append(int(dl_pool.pop()) if dl_pool and rng.random() < 0.7 else None)
            x = Pairing.from_ul_partners(partners, num_dl).to_matrix()
            assert set(np.unique(x)) <= {0.0, 1.0}
            assert x.sum(axis=0).max(initial=0) <= 1
            assert x.sum(axis=1).max(initial=0) <= 1


class TestGainTable:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            GainTable(g_ul=np.ones(2), g_dl=np.ones(3), g_cross=np.ones((3, 2)))

    def test_validation_flags_bad_entries(self):
        g = GainTable(g_ul=np.array([1e-8, 0.0]), g_dl=np.ones(1) * 1e-9,
                      g_cross=np.full((2, 1), np.inf))
        report = validate_gain_table(g)
        assert any("g_ul" in v for v in report.violations)
        assert any("g_cross" in v for v in report.violations)

    def test_arrays_are_read_only(self):
        g = GainTable(g_ul=np.ones(1), g_dl=np.ones(1), g_cross=np.ones((1, 1)))
        with pytest.raises(ValueError):
            g.g_ul[0] = 2.0
