import numpy as np
import pytest

from magnonlab import harper, numerics
from magnonlab.harper import HamiltonianSpec, SpectralConcurrence
from magnonlab.utils import GOLDEN

SCALING_SIZES = [101, 144, 233, 377, 610]


def spectrum(spec):
    return numerics.eig_hermitian(harper.build_harper(spec)).values


class TestSpec:

    @pytest.mark.parametrize('kwargs', [dict(n_sites=1, g=0.), dict(n_sites=4, g=-1.),
                                        dict(n_sites=4, g=1., sigma=0.),
                                        dict(n_sites=4, g=np.nan)])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            HamiltonianSpec(**kwargs)

    def test_incommensurate(self):
        spec = HamiltonianSpec.incommensurate(101, 0.5)
        assert spec.sigma == pytest.approx(101 * GOLDEN)
        assert spec.with_g(2.).g == 2.
        assert spec.with_g(2.).sigma == spec.sigma


class TestBuild:

    def test_three_site_ring(self):
        got = spectrum(HamiltonianSpec(3, 0.))
        assert np.allclose(got, [-0.5, -0.5, 1.], atol=1e-12)

    def test_two_site_ring(self):
        assert np.allclose(spectrum(HamiltonianSpec(2, 0.)), [-1., 1.], atol=1e-12)

    @pytest.mark.parametrize('beta', [0., 0.1, 0.25, 0.5])
    def test_free_spectrum_is_twisted_cosine(self, beta):
        n = 9
        expected = np.sort(np.cos(2. * np.pi * (np.arange(1, n + 1) + beta) / n))
        assert np.allclose(spectrum(HamiltonianSpec(n, 0., beta=beta)), expected, atol=1e-12)

    def test_spectrum_bounded(self, rng):
        for _ in range(20):
            g = 3. * rng.random()
            spec = HamiltonianSpec(int(rng.integers(2, 40)), g,
                                   sigma=10. * rng.random() + 0.1, beta=0.5 * rng.random())
            values = spectrum(spec)
            assert values[0] >= -(1. + g) - 1e-9
            assert values[-1] <= 1. + g + 1e-9

    def test_real_without_twist(self):
        m = harper.build_harper(HamiltonianSpec(6, 0.7))
        assert m.is_real
        assert m.entries[5, 0] == 0.5

    def test_complex_corner_with_twist(self):
        m = harper.build_harper(HamiltonianSpec(6, 0.7, beta=0.25))
        assert not m.is_real
        corner = m.entries[5, 0]
        assert abs(corner) == pytest.approx(0.5, abs=1e-15)
        assert corner == pytest.approx(-0.5j, abs=1e-15)
        assert m.entries[0, 5] == pytest.approx(np.conj(corner), abs=1e-15)

    def test_onsite_terms(self):
        spec = HamiltonianSpec(7, 1.3, sigma=2.)
        diag = np.diag(harper.build_harper(spec).entries)
        j = np.arange(1, 8)
        assert np.allclose(diag, 1.3 * np.cos(2. * np.pi * 2. * j / 7), atol=1e-15)

    def test_twist_periodicity(self):
        base = HamiltonianSpec.incommensurate(21, 0.8, beta=0.3)
        shifted = HamiltonianSpec.incommensurate(21, 0.8, beta=1.3)
        assert np.allclose(spectrum(base), spectrum(shifted), atol=1e-10)

    def test_reversed_twist_is_conjugate(self):
        spec = HamiltonianSpec.incommensurate(17, 0.6, beta=0.2)
        plus = harper.build_harper(spec).entries
        minus = harper.build_harper(HamiltonianSpec(17, 0.6, spec.sigma, beta=-0.2)).entries
        assert np.allclose(minus, plus.conj(), atol=1e-15)
        assert np.allclose(spectrum(spec), np.linalg.eigvalsh(minus), atol=1e-10)

    @pytest.mark.parametrize('spec', [HamiltonianSpec(8, 0.),
                                      HamiltonianSpec.incommensurate(21, 0.7)])
    def test_untwisted_conjugate_states(self, spec):
        h = harper.build_harper(spec).entries
        result = numerics.eig_hermitian(h)
        values, vectors = result.values, np.asarray(result.vectors, dtype=complex)
        for n in range(len(values)):
            v = vectors[:, n]
            assert np.allclose(np.abs(v), np.abs(v.conj()), atol=1e-14)
            same = np.abs(values - values[n]) < 1e-9
            basis = vectors[:, same]
            inside = basis @ (basis.conj().T @ v.conj())
            assert np.allclose(inside, v.conj(), atol=1e-10)

    def test_untwisted_plane_waves_pair_up(self):
        n = 8
        h = harper.build_harper(HamiltonianSpec(n, 0.)).entries
        j = np.arange(1, n + 1)
        for k in range(1, n // 2):
            wave = np.exp(2j * np.pi * k * j / n) / np.sqrt(n)
            partner = wave.conj()
            energy = np.cos(2. * np.pi * k / n)
            assert np.allclose(h @ wave, energy * wave, atol=1e-12)
            assert np.allclose(h @ partner, energy * partner, atol=1e-12)
            assert np.allclose(np.abs(wave), np.abs(partner))


class TestSpectralConcurrence:

    def test_free_twisted_states_saturate_bound(self):
        result = harper.spectral_concurrence(HamiltonianSpec(8, 0., beta=0.25))
        assert np.allclose(result.averages, 2. / 8, atol=1e-10)
        assert result.spectral_average == pytest.approx(2. / 8, abs=1e-10)

    def test_strong_potential_localizes(self):
        result = harper.spectral_concurrence(HamiltonianSpec.incommensurate(55, 100.))
        assert result.spectral_average < 1e-3

    def test_degenerate_free_chain_below_bound(self):
        n = 10
        result = harper.spectral_concurrence(HamiltonianSpec(n, 0.))
        assert result.spectral_average <= 2. / n + 1e-12
        assert np.all(result.averages <= 2. / n + 1e-12)

    def test_average_is_mean_of_states(self):
        result = harper.spectral_concurrence(HamiltonianSpec.incommensurate(34, 1.2, beta=0.1))
        assert result.spectral_average == pytest.approx(np.mean(result.averages), abs=1e-12)
        assert len(result.per_state) == len(result.energies) == 34
        assert np.all(np.diff(result.energies) >= 0)

    def test_energy_shift_invariance(self):
        spec = HamiltonianSpec.incommensurate(40, 0.5, beta=0.1)
        h = harper.build_harper(spec).entries
        shifted = numerics.eig_hermitian(h + 3.7 * np.eye(40))
        moved = SpectralConcurrence.from_spectrum(shifted)
        direct = harper.spectral_concurrence(spec)
        assert moved.spectral_average == pytest.approx(direct.spectral_average, abs=1e-9)
        assert np.allclose(moved.averages, direct.averages, atol=1e-9)

    def test_neighbor_profile_shape(self):
        result = harper.spectral_concurrence(HamiltonianSpec(11, 0., beta=0.3))
        assert result.neighbor_profile.shape == (5,)
        assert np.allclose(result.neighbor_profile, 2. / 11, atol=1e-10)


class TestSweeps:

    def test_sweep_matches_single_points(self):
        base = HamiltonianSpec(8, 0., beta=0.25)
        table = harper.sweep_g(base, [0., 0.5, 1.5])
        assert list(table.columns) == ['g', 'avg_C', 'N_times_avg_C']
        assert list(table['g']) == [0., 0.5, 1.5]
        assert table['avg_C'][0] == pytest.approx(2. / 8, abs=1e-10)
        single = harper.spectral_concurrence(base.with_g(0.5)).spectral_average
        assert table['avg_C'][1] == pytest.approx(single, abs=1e-14)
        assert np.allclose(table['N_times_avg_C'], 8 * table['avg_C'])

    def test_sweep_needs_points(self):
        with pytest.raises(ValueError):
            harper.sweep_g(HamiltonianSpec(8, 0.), [])

    def test_commensurate_decreases(self):
        table = harper.sweep_g(HamiltonianSpec(101, 0.), [0.2, 2.])
        assert table['avg_C'][1] < table['avg_C'][0]

    def test_transition_drop(self):
        base = HamiltonianSpec.incommensurate(101, 0.)
        table = harper.sweep_g(base, [0.5, 1.5])
        assert table['avg_C'][1] / table['avg_C'][0] < 0.1

    def test_free_scaling_exponent(self):
        assert harper.scaling_exponent(0., [8, 13, 21, 34], beta=0.25) == \
            pytest.approx(1., abs=1e-9)

    def test_scaling_needs_three_sizes(self):
        with pytest.raises(ValueError):
            harper.scaling_exponent(0.5, [8, 13])

    def test_scaling_table_columns(self):
        table = harper.scaling_table(0., [8, 13, 21], beta=0.25)
        assert list(table['N']) == [8, 13, 21]
        assert np.allclose(table['ln_avg_C'], np.log(2. / table['N']), atol=1e-9)
        assert harper.fit_exponent(table) == pytest.approx(1., abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize('g, expected, tol', [(0.9, 1., 0.15), (1.1, 2., 0.2)])
    def test_critical_scaling(self, g, expected, tol):
        assert harper.scaling_exponent(g, SCALING_SIZES) == pytest.approx(expected, abs=tol)


class TestEnergyProfile:

    def test_free_profile_flat(self):
        table = harper.concurrence_vs_energy(HamiltonianSpec(12, 0., beta=0.25))
        assert np.allclose(table['avg_C'], 2. / 12, atol=1e-10)
        assert np.all(np.diff(table['scaled_energy']) >= 0)

    def test_plateau(self):
        g, n = 0.5, 101
        table = harper.concurrence_vs_energy(HamiltonianSpec(n, g))
        energy = table['scaled_energy'] * (1. + g)
        avgs = table['avg_C']
        assert np.all(avgs <= 2. / n + 1e-12)
        assert np.all(np.abs(table['scaled_energy']) <= 1. + 1e-9)
        window = avgs[np.abs(energy) < 1. - g]
        assert len(window) > 0
        plateau = np.median(window)
        assert np.all(np.abs(window - plateau) <= 0.25 * plateau)
        tails = avgs[np.abs(table['scaled_energy']) > 0.85]
        assert len(tails) > 0
        assert np.max(tails) < plateau

    def test_separatrix_window(self):
        assert harper.separatrix_window(0.5) == (0.5, 1.5)
        assert harper.separatrix_window(2.) == (1., 3.)

    def test_classical_energy(self):
        assert harper.classical_energy(0., 0., 0.5) == pytest.approx(1.5)
        assert harper.classical_energy(0.5, 0., 0.5) == pytest.approx(0.5)
