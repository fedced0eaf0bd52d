"""Kicked Harper model: Floquet operator, eigenstate concurrence, dynamics.

U(tau) = exp(-i tau g cos(2 pi q) / h) exp(-i tau cos(2 pi p) / h),  h = 1/N,

with positions q_j = j/N and twisted momenta (k + beta)/N, j, k = 1..N. The
kinetic factor is diagonal in the twisted Fourier basis, the kick diagonal in
the site basis.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from magnonlab import numerics
from magnonlab import onepstate
from magnonlab.harper import HamiltonianSpec, SpectralConcurrence, build_harper
from magnonlab.utils import parallel_map

TRANSIENT_KICKS = 100


@dataclass(frozen=True)
class FloquetSpec:
    """Parameters of the kicked Harper map; h = 1/N is implied.

    Args:
        n_sites (int): N >= 2
        g (float): kick strength
        tau (float): kick period parameter, > 0
        beta (float): boundary twist
    """
    n_sites: int
    g: float
    tau: float
    beta: float = 0.

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError("n_sites must be an integer >= 2")
        for name in ('g', 'tau', 'beta'):
            if not np.isfinite(getattr(self, name)):
                raise ValueError("{} must be finite".format(name))
        if not self.tau > 0:
            raise ValueError("tau must be > 0")

    def with_tau(self, tau):
        return FloquetSpec(self.n_sites, self.g, tau, self.beta)

    def static(self):
        """The Harper Hamiltonian this map reduces to as tau -> 0."""
        return HamiltonianSpec(self.n_sites, self.g, sigma=1., beta=self.beta)


@dataclass(frozen=True)
class EvolutionTrace:
    """Stroboscopic history of a state under repeated kicks.

    Args:
        times (array): kick counts 0..n_kicks
        states (list): OneParticleState per time, or None if not stored
        averages (array): <C>(t)
    """
    times: np.ndarray
    states: list
    averages: np.ndarray


def _kick_phases(spec):
    n = spec.n_sites
    j = np.arange(1, n + 1)
    kick = np.exp(-1j * spec.tau * spec.g * n * np.cos(2. * np.pi * j / n))
    kinetic = np.exp(-1j * spec.tau * n * np.cos(2. * np.pi * (j + spec.beta) / n))
    return kick, kinetic


def build_floquet(spec):
    """One-period propagator in the site basis.

    The potential factor acts after the kinetic one, as in the printed product.

    Args:
        spec (FloquetSpec): parameters

    Returns:
        UnitaryMatrix
    """
    kick, kinetic = _kick_phases(spec)
    f = numerics.dft_matrix(spec.n_sites, spec.beta)
    u = kick[:, np.newaxis] * (f.conj().T @ (kinetic[:, np.newaxis] * f))
    return numerics.UnitaryMatrix(u)


def eigenphases_trotter_reference(spec):
    """-tau N E_n (wrapped to [-pi, pi)) from the static Harper spectrum, ascending."""
    energies = numerics.eig_hermitian(build_harper(spec.static())).values
    phases = numerics.wrap_phase(-spec.tau * spec.n_sites * energies)
    return np.sort(phases)


def floquet_concurrence(spec, verbose=False):
    """Diagonalize U(tau) and digest every eigenstate.

    Returns:
        SpectralConcurrence: eigenphases in place of energies
    """
    if verbose:
        print("Diagonalizing Floquet operator N={} g={} tau={} beta={}".format(
              spec.n_sites, spec.g, spec.tau, spec.beta))
    spectrum = numerics.eig_unitary(build_floquet(spec))
    return SpectralConcurrence.from_spectrum(spectrum)


def sweep_tau(spec, tau_values, workers=1, verbose=False):
    """Scaled spectral-averaged concurrence N<C> as a function of tau.

    Returns:
        DataFrame: columns tau, beta, avg_C, N_times_avg_C
    """
    tau_values = [float(t) for t in tau_values]
    if len(tau_values) == 0:
        raise ValueError("tau_values must not be empty")

    def _point(tau):
        return floquet_concurrence(spec.with_tau(tau)).spectral_average

    avgs = np.array(parallel_map(_point, tau_values, workers=workers,
                                 verbose=verbose, desc='tau sweep beta={}'.format(spec.beta)))
    return pd.DataFrame(dict(tau=tau_values, beta=spec.beta, avg_C=avgs,
                             N_times_avg_C=spec.n_sites * avgs))


def evolve(spec, initial, n_kicks, store_states=True):
    """Apply U(tau) n_kicks times to an initial state.

    Args:
        spec (FloquetSpec): parameters
        initial (OneParticleState): state at t = 0
        n_kicks (int): number of periods, >= 0
        store_states (bool): keep every intermediate state

    Returns:
        EvolutionTrace
    """
    if n_kicks < 0:
        raise ValueError("n_kicks must be >= 0")
    if initial.n_sites != spec.n_sites:
        raise ValueError("initial state has {} sites, map has {}".format(
                         initial.n_sites, spec.n_sites))
    u = build_floquet(spec).entries
    psi = np.asarray(initial.amplitudes, dtype=complex)
    states = [initial] if store_states else None
    averages = np.empty(n_kicks + 1)
    averages[0] = onepstate.average_concurrence(initial)
    for t in range(1, n_kicks + 1):
        psi = u @ psi
        state = onepstate.OneParticleState(psi, label='t={}'.format(t))
        averages[t] = onepstate.average_concurrence(state)
        if store_states:
            states.append(state)
    return EvolutionTrace(times=np.arange(n_kicks + 1), states=states, averages=averages)


def time_statistics(trace, n_sites, transient=TRANSIENT_KICKS):
    """Mean and standard deviation of N<C>(t) after the transient.

    Returns:
        tuple: (mean, std)
    """
    tail = n_sites * trace.averages[transient:]
    if tail.size == 0:
        raise ValueError("trace shorter than the transient of {} kicks".format(transient))
    return float(np.mean(tail)), float(np.std(tail))


def first_passage_kick(trace, n_sites, level):
    """First kick at which N<C>(t) reaches `level`, or None."""
    hits = np.nonzero(n_sites * trace.averages >= level)[0]
    return int(trace.times[hits[0]]) if hits.size else None


def neighbor_profile_sweep(spec, r_values, tau_values, workers=1, verbose=False):
    """Spectrum-averaged r-th neighbor concurrence for each (r, tau).

    Args:
        spec (FloquetSpec): N, g and beta are kept, tau replaced
        r_values (array): neighbor distances in 1..N-1
        tau_values (array): kick periods

    Returns:
        array: shape (len(r_values), len(tau_values))
    """
    r_values = [int(r) for r in r_values]
    if any(not 1 <= r <= spec.n_sites - 1 for r in r_values):
        raise IndexError("r values must lie in 1..{}".format(spec.n_sites - 1))
    tau_values = [float(t) for t in tau_values]

    def _point(tau):
        spectrum = numerics.eig_unitary(build_floquet(spec.with_tau(tau)))
        mags = np.abs(spectrum.vectors)
        return [2. * np.mean(mags * np.roll(mags, -r, axis=0)) for r in r_values]

    columns = parallel_map(_point, tau_values, workers=workers,
                           verbose=verbose, desc='r profile')
    return np.array(columns).T.reshape(len(r_values), len(tau_values))
