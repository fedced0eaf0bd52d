import numpy as np
import pytest

from magnonlab import numerics
from magnonlab import onepstate as ops
from magnonlab.onepstate import OneParticleState, TwoSiteReducedDensity
from magnonlab.utils import InvalidState, InvalidDensity


def uniform(n):
    return OneParticleState(np.full(n, 1. / np.sqrt(n)))


class TestState:

    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidState):
            OneParticleState(np.array([1., 1.]))

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidState):
            OneParticleState(np.array([np.nan, 1.]))

    def test_from_amplitudes_normalizes(self):
        s = OneParticleState.from_amplitudes([3., 4j])
        assert np.sum(np.abs(s.amplitudes) ** 2) == pytest.approx(1., abs=1e-15)

    def test_from_zero_vector(self):
        with pytest.raises(InvalidState):
            OneParticleState.from_amplitudes(np.zeros(3))

    def test_site_index_range(self):
        with pytest.raises(IndexError):
            ops.site_state(4, 5)
        with pytest.raises(IndexError):
            ops.site_state(4, 0)

    def test_single_site_rejected_for_pairs(self):
        with pytest.raises(InvalidState):
            ops.average_concurrence(OneParticleState(np.array([1.])))


class TestPairConcurrence:

    def test_uniform(self):
        s = uniform(4)
        for i in range(1, 4):
            for j in range(i + 1, 5):
                assert ops.pair_concurrence(s, i, j) == pytest.approx(0.5, abs=1e-15)

    def test_localized(self):
        s = ops.site_state(5, 2)
        assert np.all(ops.pair_matrix(s) == 0.)

    def test_hand_value_and_oracle(self):
        s = OneParticleState(np.sqrt([0.5, 0.3, 0.2]))
        c = ops.pair_concurrence(s, 1, 2)
        assert c == pytest.approx(2. * np.sqrt(0.15), abs=1e-12)
        assert c == pytest.approx(0.774597, abs=1e-6)
        rho = ops.reduce_two_site(s, 1, 2)
        assert ops.wootters_concurrence(rho) == pytest.approx(c, abs=1e-10)
        assert ops.wootters_concurrence(rho, oracle=True) == pytest.approx(c, abs=1e-10)

    @pytest.mark.parametrize('pair', [(2, 2), (3, 1), (0, 2), (1, 5)])
    def test_bad_indices(self, pair):
        with pytest.raises(IndexError):
            ops.pair_concurrence(uniform(4), *pair)


class TestReducedDensity:

    def test_uniform_pair(self):
        rho = ops.reduce_two_site(uniform(4), 1, 2)
        got = (rho.v, rho.u, rho.w1, rho.w2, abs(rho.z))
        assert np.allclose(got, (0.5, 0., 0.25, 0.25, 0.25), atol=1e-15)

    def test_localized_pair(self):
        rho = ops.reduce_two_site(ops.site_state(3, 1), 1, 2)
        got = (rho.v, rho.u, rho.w1, rho.w2, abs(rho.z))
        assert np.allclose(got, (0., 0., 0., 1., 0.), atol=1e-15)

    def test_trace(self, random_state):
        for n in (2, 5, 9):
            s = random_state(n)
            rho = ops.reduce_two_site(s, 1, n)
            assert rho.v + rho.u + rho.w1 + rho.w2 == pytest.approx(1., abs=1e-12)

    def test_bad_trace(self):
        with pytest.raises(InvalidDensity):
            TwoSiteReducedDensity(v=0.5, u=0., w1=0.25, w2=0.5, z=0.)

    def test_positivity(self):
        with pytest.raises(InvalidDensity):
            TwoSiteReducedDensity(v=0., u=0., w1=0.5, w2=0.5, z=0.6)

    def test_matrix_is_density(self):
        rho = TwoSiteReducedDensity(v=0.2, u=0.1, w1=0.3, w2=0.4, z=0.1 + 0.2j)
        m = rho.matrix()
        assert np.trace(m).real == pytest.approx(1.)
        assert np.allclose(m, m.conj().T)
        assert np.min(np.linalg.eigvalsh(m)) >= -1e-12


class TestWootters:

    def test_bell_block(self):
        rho = TwoSiteReducedDensity(v=0., u=0., w1=0.5, w2=0.5, z=0.5)
        assert ops.wootters_concurrence(rho) == pytest.approx(1.)
        assert ops.wootters_concurrence(rho, oracle=True) == pytest.approx(1., abs=1e-10)

    def test_product_block(self):
        rho = TwoSiteReducedDensity(v=0.25, u=0.25, w1=0.25, w2=0.25, z=0.)
        assert ops.wootters_concurrence(rho) == 0.
        assert ops.wootters_concurrence(rho, oracle=True) == pytest.approx(0., abs=1e-10)

    def test_two_particle_block(self):
        rho = TwoSiteReducedDensity(v=0.25, u=0.09, w1=0.33, w2=0.33, z=0.2)
        assert ops.wootters_concurrence(rho) == pytest.approx(0.1, abs=1e-12)
        assert ops.wootters_concurrence(rho, oracle=True) == pytest.approx(0.1, abs=1e-10)

    def test_oracle_on_random_states(self, rng, random_state):
        for _ in range(1000):
            n = int(rng.integers(2, 17))
            s = random_state(n)
            i, j = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False))
            rho = ops.reduce_two_site(s, int(i), int(j))
            assert ops.wootters_concurrence(rho, oracle=True) == \
                pytest.approx(ops.pair_concurrence(s, int(i), int(j)), abs=1e-10)

    def test_type_check(self):
        with pytest.raises(InvalidDensity):
            ops.wootters_concurrence(np.eye(4) / 4.)


class TestAverages:

    @pytest.mark.parametrize('n', [2, 7, 30])
    def test_momentum_state_saturates_bound(self, n):
        s = ops.momentum_state(n, 3, beta=0.2)
        assert ops.average_concurrence(s) == pytest.approx(2. / n, abs=1e-12)

    def test_localized(self):
        assert ops.average_concurrence(ops.site_state(6, 4)) == 0.

    def test_two_site_hand_value(self):
        s = OneParticleState(np.array([0.6, 0.8]))
        assert ops.average_concurrence(s) == pytest.approx(0.96, abs=1e-12)
        assert ops.pair_concurrence(s, 1, 2) == pytest.approx(0.96, abs=1e-12)

    def test_closed_form_matches_pair_mean(self, random_state):
        for n in (2, 3, 10, 40):
            s = random_state(n)
            direct = np.sum(ops.pair_matrix(s)) / ops.num_pairs(n)
            assert ops.average_concurrence(s) == pytest.approx(direct, abs=1e-12)
            assert ops.average_concurrence(s) <= 2. / n + 1e-12

    def test_renyi_identity(self, random_state):
        for n in (2, 5, 17, 64):
            s = random_state(n)
            via_entropy = (np.exp(ops.renyi_half(s)) - 1.) / ops.num_pairs(n)
            assert ops.average_concurrence(s) == pytest.approx(via_entropy, abs=1e-12)
            assert 1. - 1e-12 <= ops.participation_exponent(s) <= n + 1e-12

    def test_renyi_extremes(self):
        assert ops.renyi_half(uniform(9)) == pytest.approx(np.log(9.), abs=1e-12)
        assert ops.renyi_half(ops.site_state(9, 3)) == 0.

    def test_global_phase(self, random_state):
        s = random_state(8)
        t = OneParticleState(np.exp(0.7j) * s.amplitudes)
        assert ops.average_concurrence(t) == pytest.approx(ops.average_concurrence(s), abs=1e-15)
        assert np.allclose(ops.pair_matrix(t), ops.pair_matrix(s), atol=1e-15)

    def test_permutation(self, rng, random_state):
        s = random_state(6)
        perm = rng.permutation(6)
        t = OneParticleState(s.amplitudes[perm])
        full_s = ops.pair_matrix(s) + ops.pair_matrix(s).T
        full_t = ops.pair_matrix(t) + ops.pair_matrix(t).T
        assert np.allclose(full_t, full_s[np.ix_(perm, perm)], atol=1e-15)
        assert ops.average_concurrence(t) == pytest.approx(ops.average_concurrence(s), abs=1e-14)


class TestNeighbor:

    @pytest.mark.parametrize('r', [1, 2, 3])
    def test_uniform(self, r):
        assert ops.neighbor_concurrence(uniform(4), r) == pytest.approx(0.5, abs=1e-15)

    def test_localized(self):
        s = ops.site_state(6, 1)
        assert all(ops.neighbor_concurrence(s, r) == 0. for r in range(1, 6))

    def test_hand_value(self):
        a, b = 0.6, 0.8
        s = OneParticleState(np.array([a, b, 0., 0.]))
        assert ops.neighbor_concurrence(s, 1) == pytest.approx(a * b / 2., abs=1e-15)

    def test_wraps_around(self):
        s = OneParticleState(np.array([0.6, 0., 0., 0.8]))
        assert ops.neighbor_concurrence(s, 1) == pytest.approx(0.6 * 0.8 / 2., abs=1e-15)

    @pytest.mark.parametrize('r', [0, 4])
    def test_range(self, r):
        with pytest.raises(IndexError):
            ops.neighbor_concurrence(uniform(4), r)


class TestSummary:

    def test_summarize(self, random_state):
        s = random_state(9)
        summary = ops.summarize(s)
        assert summary.n_sites == 9
        assert summary.average == pytest.approx(ops.average_concurrence(s), abs=1e-12)
        assert len(summary.neighbor_profile) == 4
        for r in range(1, 5):
            assert summary.neighbor_profile[r - 1] == \
                pytest.approx(ops.neighbor_concurrence(s, r), abs=1e-14)
        assert np.allclose(summary.pair_values, ops.pair_matrix(s), atol=1e-15)
        assert np.all((summary.pair_values >= 0.) & (summary.pair_values <= 1.))

    def test_columns_match_single_states(self, random_state):
        states = [random_state(7) for _ in range(4)]
        vectors = np.column_stack([s.amplitudes for s in states])
        summaries = ops.summarize_columns(vectors)
        for s, summary in zip(states, summaries):
            assert summary.average == pytest.approx(ops.average_concurrence(s), abs=1e-12)

    def test_summary_arrays_read_only(self, random_state):
        summary = ops.summarize(random_state(6))
        for arr in (summary.neighbor_profile, summary.magnitudes):
            with pytest.raises(ValueError):
                arr[0] = 0.
        assert ops.frozen_array is numerics.frozen_array
