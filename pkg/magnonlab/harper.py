"""Static Harper Hamiltonian on a periodic N-site chain.

H = sum_j [ (c_j^dag c_{j+1} + h.c.)/2 + g cos(2 pi sigma j / N) c_j^dag c_j ]

with a twist beta carried by the boundary bond (a flux line through the ring).
For sigma/N a fixed irrational the infinite chain has a metal-insulator
transition at g = 1, visible here as a sharp drop of the spectral-averaged
concurrence.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from magnonlab import numerics
from magnonlab import onepstate
from magnonlab.utils import GOLDEN, parallel_map


@dataclass(frozen=True)
class HamiltonianSpec:
    """Parameters of the Harper Hamiltonian.

    Args:
        n_sites (int): N >= 2
        g (float): onsite strength, >= 0
        sigma (float): incommensurability, > 0
        beta (float): boundary twist in [0, 1/2]
    """
    n_sites: int
    g: float
    sigma: float = 1.
    beta: float = 0.

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError("n_sites must be an integer >= 2")
        for name in ('g', 'sigma', 'beta'):
            if not np.isfinite(getattr(self, name)):
                raise ValueError("{} must be finite".format(name))
        if self.g < 0:
            raise ValueError("g must be >= 0")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")

    @classmethod
    def incommensurate(cls, n_sites, g, gamma=GOLDEN, beta=0.):
        """Spec with sigma = N * gamma, the scaling used for the transition."""
        return cls(n_sites=n_sites, g=g, sigma=n_sites * gamma, beta=beta)

    def with_g(self, g):
        return HamiltonianSpec(self.n_sites, g, self.sigma, self.beta)


@dataclass(frozen=True)
class SpectralConcurrence:
    """Per-eigenstate concurrence of a whole spectrum.

    Args:
        energies (array): eigenvalues (energies, or eigenphases for Floquet
            operators), ascending
        per_state (list): ConcurrenceSummary per eigenstate, index-aligned
        spectral_average (float): mean of the per-state averages
    """
    energies: np.ndarray
    per_state: list
    spectral_average: float

    @property
    def averages(self):
        return np.array([s.average for s in self.per_state])

    @property
    def neighbor_profile(self):
        """C_r averaged over the spectrum, r = 1..floor(N/2)."""
        return np.mean([s.neighbor_profile for s in self.per_state], axis=0)

    @classmethod
    def from_spectrum(cls, spectrum):
        """Wrap a SpectralSet: one ConcurrenceSummary per eigenvector column."""
        per_state = onepstate.summarize_columns(spectrum.vectors)
        averages = np.array([s.average for s in per_state])
        return cls(energies=np.array(spectrum.values), per_state=per_state,
                   spectral_average=float(np.mean(averages)))


def classical_energy(q, p, g):
    """Torus Hamiltonian cos(2 pi p) + g cos(2 pi q) of the large-N limit."""
    return np.cos(2. * np.pi * np.asarray(p)) + g * np.cos(2. * np.pi * np.asarray(q))


def separatrix_window(g):
    """Energies (1 - g, 1 + g) bounding the rotational plateau, |E| < 1 - g for g < 1."""
    return abs(1. - g), 1. + g


def build_harper(spec):
    """Harper matrix in the site basis.

    Hopping 1/2 on the off-diagonals, onsite g cos(2 pi sigma j / N) for
    j = 1..N, and the boundary bond (N, 1) carrying (1/2) exp(-2 pi i beta),
    (1, N) its conjugate. At g = 0 the spectrum is cos(2 pi (k + beta)/N).

    Args:
        spec (HamiltonianSpec): parameters

    Returns:
        HermitianMatrix
    """
    n = spec.n_sites
    j = np.arange(1, n + 1)
    dtype = complex if spec.beta % 1. else float
    h = np.zeros((n, n), dtype=dtype)
    h[j - 1, j - 1] = spec.g * np.cos(2. * np.pi * spec.sigma * j / n)
    idx = np.arange(n - 1)
    h[idx, idx + 1] = 0.5
    h[idx + 1, idx] = 0.5
    corner = 0.5 * np.exp(-2j * np.pi * spec.beta)
    if dtype is float:
        corner = corner.real
    # N = 2 has a single bond that is both interior and boundary
    h[n - 1, 0] += corner
    h[0, n - 1] += np.conj(corner)
    return numerics.HermitianMatrix(h)


def spectral_concurrence(spec, verbose=False):
    """Diagonalize the Harper matrix and digest every eigenstate.

    Args:
        spec (HamiltonianSpec): parameters
        verbose (bool): print progress

    Returns:
        SpectralConcurrence
    """
    if verbose:
        print("Diagonalizing Harper matrix N={} g={} sigma={} beta={}".format(
              spec.n_sites, spec.g, spec.sigma, spec.beta))
    spectrum = numerics.eig_hermitian(build_harper(spec))
    return SpectralConcurrence.from_spectrum(spectrum)


def sweep_g(base, g_values, workers=1, verbose=False):
    """Spectral-averaged concurrence as a function of onsite strength.

    Args:
        base (HamiltonianSpec): N, sigma and beta are kept, g replaced
        g_values (array): onsite strengths
        workers (int): number of processes
        verbose (bool): show a progress bar

    Returns:
        DataFrame: columns g, avg_C, N_times_avg_C in g_values order
    """
    g_values = [float(g) for g in g_values]
    if len(g_values) == 0:
        raise ValueError("g_values must not be empty")

    def _point(g):
        return spectral_concurrence(base.with_g(g)).spectral_average

    avgs = np.array(parallel_map(_point, g_values, workers=workers,
                                 verbose=verbose, desc='g sweep'))
    return pd.DataFrame(dict(g=g_values, avg_C=avgs, N_times_avg_C=base.n_sites * avgs))


def scaling_table(g, n_values, gamma=GOLDEN, beta=0., workers=1, verbose=False):
    """Spectral-averaged concurrence for each N with sigma = N * gamma.

    Returns:
        DataFrame: columns N, avg_C, ln_N, ln_avg_C
    """
    n_values = [int(n) for n in n_values]

    def _point(n):
        spec = HamiltonianSpec.incommensurate(n, g, gamma=gamma, beta=beta)
        return spectral_concurrence(spec).spectral_average

    avgs = np.array(parallel_map(_point, n_values, workers=workers,
                                 verbose=verbose, desc='N scaling g={}'.format(g)))
    return pd.DataFrame(dict(N=n_values, avg_C=avgs, ln_N=np.log(n_values),
                             ln_avg_C=np.log(avgs)))


def scaling_exponent(g, n_values, gamma=GOLDEN, beta=0., workers=1, verbose=False):
    """Exponent a in <C> ~ N^(-a), from a least-squares fit of ln <C> vs ln N.

    Args:
        g (float): onsite strength
        n_values (array): at least three chain lengths
        gamma (float): sigma = N * gamma per point
        beta (float): twist

    Returns:
        float: positive exponent a
    """
    if len(n_values) < 3:
        raise ValueError("need at least 3 chain lengths")
    table = scaling_table(g, n_values, gamma=gamma, beta=beta,
                          workers=workers, verbose=verbose)
    return fit_exponent(table)


def fit_exponent(table):
    """Minus the slope of ln_avg_C against ln_N in a scaling_table."""
    slope, _ = np.polyfit(table['ln_N'], table['ln_avg_C'], 1)
    return float(-slope)


def concurrence_vs_energy(spec, verbose=False):
    """Per-state average concurrence against scaled energy E/(1+g).

    Returns:
        DataFrame: columns scaled_energy, avg_C, N_times_avg_C sorted by energy
    """
    result = spectral_concurrence(spec, verbose=verbose)
    avgs = result.averages
    return pd.DataFrame(dict(scaled_energy=result.energies / (1. + spec.g),
                             avg_C=avgs, N_times_avg_C=spec.n_sites * avgs))
