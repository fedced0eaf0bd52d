import numpy as np
import pytest

from magnonlab.onepstate import OneParticleState


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    """Keep sweeps in-process unless a test asks for a pool."""
    monkeypatch.setenv('MAGNON_LAB_THREADS', '1')


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Factory of random one-particle states."""
    def _make(n, real=False):
        amps = rng.standard_normal(n)
        if not real:
            amps = amps + 1j * rng.standard_normal(n)
        return OneParticleState.from_amplitudes(amps)
    return _make


@pytest.fixture
def random_hermitian(rng):
    def _make(n, real=False):
        a = rng.standard_normal((n, n))
        if not real:
            a = a + 1j * rng.standard_normal((n, n))
        return (a + a.conj().T) / 2.
    return _make


@pytest.fixture
def random_unitary(rng):
    """Haar-distributed unitaries from the phase-corrected QR of a complex Ginibre matrix."""
    def _make(n):
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.)
        q, r = np.linalg.qr(z)
        d = np.diag(r)
        return q * (d / np.abs(d))[np.newaxis, :]
    return _make
