import math

import numpy as np
import pytest

from fdsched.model import (
    GainTable,
    Pairing,
    PowerAllocation,
    ScenarioParams,
    WeightMode,
)
from fdsched.radio import (
    benefit_value,
    corner_points,
    corner_tables,
    evaluate_pair,
    evaluate_solo_dl,
    evaluate_solo_ul,
    make_weights,
    outcome_metrics,
    sinr_dl,
    sinr_ul,
    spectral_efficiency,
)
from fdsched.scenario import build_gain_table

P24 = 10 ** (-0.6)           # 24 dBm in watts
NOISE = 2.291e-15            # -116.4 dBm per channel (rounded)
BETA = 1e-10                 # -100 dB residual self-interference


def params_with(**kw):
    defaults = dict(num_ul=4, num_dl=4, num_channels=4,
                    noise_power_w=NOISE, si_cancellation=BETA)
    defaults.update(kw)
    return ScenarioParams(**defaults)


def table(g_ul, g_dl, g_cross):
    return GainTable(g_ul=np.asarray(g_ul, float), g_dl=np.asarray(g_dl, float),
                     g_cross=np.asarray(g_cross, float))


def random_table(rng, num_ul=4, num_dl=4):
    params = ScenarioParams(num_ul=num_ul, num_dl=num_dl,
                            num_channels=num_ul + num_dl)
    return build_gain_table(params, rng)


class TestSinr:
    def test_unpaired_ul_sees_noise_only(self):
        assert sinr_ul(P24, 1e-8, 0.0, BETA, NOISE) == pytest.approx(P24 * 1e-8 / NOISE)

    def test_reference_value(self):
        # p=0.2512 W, g=-80 dB, both powers equal, beta=-100 dB: the SI term
        # dominates the noise and the SINR sits just below g/beta = 100.
        got = sinr_ul(P24, 1e-8, P24, BETA, NOISE)
        assert got == pytest.approx(99.9909, abs=5e-3)
        assert 10 * math.log10(got) == pytest.approx(20.0, abs=1e-3)

    def test_monotone_in_interference(self):
        base = sinr_ul(P24, 1e-8, P24, BETA, NOISE)
        assert sinr_ul(P24, 1e-8, P24, 2 * BETA, NOISE) < base
        assert sinr_dl(P24, 1e-8, P24, 2e-9, NOISE) < sinr_dl(P24, 1e-8, P24, 1e-9, NOISE)

    def test_monotone_in_own_power(self):
        assert sinr_ul(2 * P24, 1e-8, P24, BETA, NOISE) > sinr_ul(P24, 1e-8, P24, BETA, NOISE)

    def test_dl_mirrors_ul(self):
        assert sinr_dl(P24, 1e-8, 0.0, 1e-9, NOISE) == pytest.approx(P24 * 1e-8 / NOISE)
        assert sinr_dl(P24, 1e-8, P24, 0.0, NOISE) == pytest.approx(P24 * 1e-8 / NOISE)
        assert sinr_dl(0.0, 1e-8, P24, 1e-9, NOISE) == 0.0


class TestSpectralEfficiency:
    def test_reference_points(self):
        assert spectral_efficiency(0.0) == 0.0
        assert spectral_efficiency(1.0) == pytest.approx(1.0)
        assert spectral_efficiency(99.1) == pytest.approx(6.6453, abs=1e-3)


class TestWeights:
    def test_sum_rate_is_all_ones(self):
        g = table([1e-8, 1e-9], [1e-7], [[1e-9], [1e-10]])
        w = make_weights(WeightMode.SUM_RATE, g)
        assert np.all(w.alpha_ul == 1.0) and np.all(w.alpha_dl == 1.0)

    def test_path_loss_compensation_is_reciprocal(self):
        g = table([1e-8], [1e-7], [[1e-9]])
        w = make_weights(WeightMode.PATH_LOSS_COMPENSATION, g)
        assert w.alpha_ul[0] == pytest.approx(1e8)
        assert w.alpha_dl[0] == pytest.approx(1e7)

    def test_zero_gain_rejected_for_pl(self):
        g = table([0.0], [1e-7], [[1e-9]])
        with pytest.raises(ValueError):
            make_weights(WeightMode.PATH_LOSS_COMPENSATION, g)


class TestEvaluatePair:
    def test_interference_free_prefers_both_on(self):
        g = table([1e-8], [1e-8], [[1e-30]])
        for mu in (0.0, 1.0):
            params = params_with(num_ul=1, num_dl=1, num_channels=1,
                                 si_cancellation=1e-30, mu=mu)
            w = make_weights(WeightMode.SUM_RATE, g)
            ev = evaluate_pair(0, 0, g, params, w)
            assert ev.best_powers == (params.p_max_ul_w, params.p_max_dl_w)
            assert ev.benefit > 0

    def test_huge_cross_gain_with_max_min_objective(self):
        # both-on keeps a sliver of min SE; one-off corners zero it out, so
        # ties at ~0 benefit resolve to both-on
        g = table([1e-8], [1e-8], [[1.0]])
        params = params_with(num_ul=1, num_dl=1, num_channels=1, mu=1.0)
        w = make_weights(WeightMode.SUM_RATE, g)
        ev = evaluate_pair(0, 0, g, params, w)
        assert ev.best_powers == (params.p_max_ul_w, params.p_max_dl_w)
        assert ev.benefit == pytest.approx(0.0, abs=1e-6)

    def test_benefit_matches_independent_corner_recomputation(self):
        rng = np.random.default_rng(12)
        params = params_with(mu=0.4)
        for _ in range(50):
            g = random_table(rng)
            w = make_weights(WeightMode.SUM_RATE, g)
            i, j = rng.integers(0, 4, size=2)
            ev = evaluate_pair(int(i), int(j), g, params, w)
            best = -np.inf
            for p_u, p_d in corner_points(params):
                c_u = math.log2(1 + p_u * g.g_ul[i] / (NOISE + p_d * BETA))
                c_d = math.log2(1 + p_d * g.g_dl[j] / (NOISE + p_u * g.g_cross[i, j]))
                best = max(best, benefit_value(c_u, c_d, 1.0, 1.0, params.mu))
            assert ev.benefit == pytest.approx(best, rel=1e-12)

    def test_vectorized_tables_match_scalar_evaluation(self):
        rng = np.random.default_rng(21)
        for mu in (0.0, 0.3, 1.0):
            params = params_with(mu=mu)
            g = random_table(rng)
            w = make_weights(WeightMode.SUM_RATE, g)
            tables = corner_tables(g, params, w)
            corners = corner_points(params)
            for i in range(4):
                for j in range(4):
                    ev = evaluate_pair(i, j, g, params, w)
                    k = tables.best_corner[i, j]
                    assert corners[k] == ev.best_powers
                    assert tables.benefit[i, j, k] == pytest.approx(ev.benefit, rel=1e-12)
                    assert tables.se_ul[i, j, k] == pytest.approx(ev.se_ul, rel=1e-12)
                    assert tables.se_dl[i, j, k] == pytest.approx(ev.se_dl, rel=1e-12)


class TestSolo:
    def test_solo_ul_is_interference_free(self):
        g = table([1e-8], [1e-8], [[1e-9]])
        params = params_with(num_ul=1, num_dl=1, num_channels=2, mu=0.0)
        w = make_weights(WeightMode.SUM_RATE, g)
        se, contrib = evaluate_solo_ul(0, g, params, w)
        assert se == pytest.approx(math.log2(1 + params.p_max_ul_w * 1e-8 / NOISE))
        assert contrib == pytest.approx(se)

    def test_contribution_vanishes_at_mu_one(self):
        g = table([1e-8], [1e-8], [[1e-9]])
        params = params_with(num_ul=1, num_dl=1, num_channels=2, mu=1.0)
        w = make_weights(WeightMode.SUM_RATE, g)
        _, contrib_u = evaluate_solo_ul(0, g, params, w)
        _, contrib_d = evaluate_solo_dl(0, g, params, w)
        assert contrib_u == 0.0 and contrib_d == 0.0


class TestOutcomeMetrics:
    def test_all_solo_at_max_power(self):
        rng = np.random.default_rng(5)
        g = random_table(rng, 2, 2)
        params = params_with(num_ul=2, num_dl=2, num_channels=4, mu=0.3)
        w = make_weights(WeightMode.SUM_RATE, g)
        pairing = Pairing.from_ul_partners([None, None], 2)
        powers = PowerAllocation(np.full(2, params.p_max_ul_w),
                                 np.full(2, params.p_max_dl_w))
        out = outcome_metrics(pairing, powers, g, params, w)
        se = np.log2(1 + params.p_max_ul_w * np.concatenate([g.g_ul, g.g_dl]) / NOISE)
        assert out.all_se() == pytest.approx(se)
        assert out.objective == pytest.approx(0.7 * se.sum() + 0.3 * se.min())

    def test_mu_one_objective_is_min(self):
        rng = np.random.default_rng(6)
        g = random_table(rng)
        params = params_with(mu=1.0)
        w = make_weights(WeightMode.SUM_RATE, g)
        pairing = Pairing.from_ul_partners([0, 1, 2, 3], 4)
        powers = PowerAllocation(np.full(4, params.p_max_ul_w),
                                 np.full(4, params.p_max_dl_w))
        out = outcome_metrics(pairing, powers, g, params, w)
        assert out.objective == pytest.approx(out.min_se, rel=1e-12)

    def test_single_pair_matches_evaluate_pair(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            g = random_table(rng, 1, 1)
            params = params_with(num_ul=1, num_dl=1, num_channels=1,
                                 mu=float(rng.random()))
            w = make_weights(WeightMode.SUM_RATE, g)
            ev = evaluate_pair(0, 0, g, params, w)
            pairing = Pairing.from_ul_partners([0], 1)
            powers = PowerAllocation(np.array([ev.best_powers[0]]),
                                     np.array([ev.best_powers[1]]))
            out = outcome_metrics(pairing, powers, g, params, w)
            assert out.objective == pytest.approx(ev.benefit, rel=1e-12)

    def test_weighted_sum_additivity_at_mu_zero(self):
        # outcome of an assembled schedule = sum of pair benefits + solo parts
        rng = np.random.default_rng(8)
        params = params_with(num_ul=3, num_dl=3, num_channels=6, mu=0.0)
        for _ in range(20):
            g = random_table(rng, 3, 3)
            w = make_weights(WeightMode.SUM_RATE, g)
            ev01 = evaluate_pair(0, 1, g, params, w)
            ev12 = evaluate_pair(1, 2, g, params, w)
            se_solo_u, contrib_u = evaluate_solo_ul(2, g, params, w)
            _, contrib_d = evaluate_solo_dl(0, g, params, w)
            pairing = Pairing.from_ul_partners([1, 2, None], 3)
            p_ul = np.array([ev01.best_powers[0], ev12.best_powers[0], params.p_max_ul_w])
            p_dl = np.array([params.p_max_dl_w, ev01.best_powers[1], ev12.best_powers[1]])
            out = outcome_metrics(pairing, PowerAllocation(p_ul, p_dl), g, params, w)
            expected = ev01.benefit + ev12.benefit + contrib_u + contrib_d
            assert out.objective == pytest.approx(expected, rel=1e-9)

    def test_objective_recomputable_from_stored_fields(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            g = random_table(rng)
            params = params_with(mu=float(rng.random()))
            w = make_weights(WeightMode.SUM_RATE, g)
            pairing = Pairing.from_ul_partners(list(rng.permutation(4)), 4)
            powers = PowerAllocation(np.full(4, params.p_max_ul_w),
                                     np.full(4, params.p_max_dl_w))
            out = outcome_metrics(pairing, powers, g, params, w)
            recomputed = ((1 - params.mu) * (w.alpha_ul @ out.se_ul + w.alpha_dl @ out.se_dl)
                          + params.mu * out.all_se().min())
            assert out.objective == pytest.approx(recomputed, rel=1e-9)
            assert out.min_se == out.all_se().min()
            assert out.sum_se == pytest.approx(out.all_se().sum(), rel=1e-12)

    def test_dimension_mismatch_rejected(self):
        g = table([1e-8], [1e-8], [[1e-9]])
        params = params_with(num_ul=1, num_dl=1, num_channels=1)
        w = make_weights(WeightMode.SUM_RATE, g)
        with pytest.raises(ValueError):
            outcome_metrics(Pairing.from_ul_partners([None, None], 1),
                            PowerAllocation(np.ones(2), np.ones(1)), g, params, w)
