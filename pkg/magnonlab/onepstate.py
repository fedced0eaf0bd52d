"""One-particle states of an N-site chain and their pairwise entanglement.

A one-particle state |alpha> = sum_l phi_l |l> puts a single excitation in
superposition over the sites. For such states the two-site reduced density
matrix has u = 0 and the concurrence of the pair (i, j) is 2|phi_i phi_j|.
Sites are numbered 1..N throughout.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from magnonlab.numerics import frozen_array
from magnonlab.utils import InvalidState, InvalidDensity

NORM_TOL = 1e-10
RANK_TOL = 1e-14


@dataclass(frozen=True)
class OneParticleState:
    """Normalized amplitude vector over N sites.

    Args:
        amplitudes (array): complex phi_l, l = 1..N, with sum |phi_l|^2 = 1
        label (str): (optional) e.g. eigenstate index
    """
    amplitudes: np.ndarray
    label: str = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1 or amps.size < 1:
            raise InvalidState("amplitudes must be a non-empty vector")
        if not np.all(np.isfinite(amps)):
            raise InvalidState("amplitudes must be finite")
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.) > NORM_TOL:
            raise InvalidState("state norm {:.15g} differs from 1".format(norm))
        object.__setattr__(self, 'amplitudes', frozen_array(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes, label=None):
        """Normalize arbitrary non-zero amplitudes into a state."""
        amps = np.asarray(amplitudes)
        norm = np.linalg.norm(amps)
        if not norm > 0:
            raise InvalidState("cannot normalize a zero vector")
        return cls(amps / norm, label=label)

    @property
    def n_sites(self):
        return self.amplitudes.size

    @cached_property
    def magnitudes(self):
        """|phi_l| for l = 1..N."""
        return frozen_array(np.abs(self.amplitudes))


def site_state(n, site):
    """Site-localized state |l>, a completely separable state."""
    _check_site(n, site)
    amps = np.zeros(n, dtype=complex)
    amps[site - 1] = 1.
    return OneParticleState(amps, label='site {}'.format(site))


def momentum_state(n, k, beta=0.):
    """Plane wave exp(2 pi i (k + beta) j / N) / sqrt(N), j = 1..N."""
    j = np.arange(1, n + 1)
    amps = np.exp(2j * np.pi * (k + beta) * j / n) / np.sqrt(n)
    return OneParticleState(amps, label='momentum {}'.format(k))


def _check_site(n, site):
    if not 1 <= site <= n:
        raise IndexError("site {} outside 1..{}".format(site, n))


def _check_pair(s, i, j):
    if s.n_sites < 2:
        raise InvalidState("pairwise measures need N >= 2")
    _check_site(s.n_sites, i)
    _check_site(s.n_sites, j)
    if not i < j:
        raise IndexError("need i < j, got ({}, {})".format(i, j))


def _require_pairs(s):
    if s.n_sites < 2:
        raise InvalidState("pairwise measures need N >= 2")


"""Two-site reduced density
"""

@dataclass(frozen=True)
class TwoSiteReducedDensity:
    """Number-conserving two-site block
    [[v, 0, 0, 0], [0, w1, z*, 0], [0, z, w2, 0], [0, 0, 0, u]].

    Args:
        v (float): <(1 - n_i)(1 - n_j)>
        u (float): <n_i n_j>
        w1 (float): <(1 - n_i) n_j>
        w2 (float): <n_i (1 - n_j)>
        z (complex): coherence between the singly occupied configurations
    """
    v: float
    u: float
    w1: float
    w2: float
    z: complex

    def __post_init__(self):
        probs = np.array([self.v, self.u, self.w1, self.w2], dtype=float)
        if not np.all(np.isfinite(probs)) or not np.isfinite(self.z):
            raise InvalidDensity("non-finite entries")
        if abs(probs.sum() - 1.) > 1e-10:
            raise InvalidDensity("trace {:.15g} differs from 1".format(probs.sum()))
        if np.any(probs < -1e-12):
            raise InvalidDensity("negative probability")
        if abs(self.z) ** 2 > self.w1 * self.w2 + 1e-10:
            raise InvalidDensity("|z|^2 exceeds w1*w2")

    def matrix(self):
        """Explicit 4x4 density matrix in the |00>, |01>, |10>, |11> basis."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.v
        rho[1, 1] = self.w1
        rho[2, 2] = self.w2
        rho[3, 3] = self.u
        rho[1, 2] = np.conj(self.z)
        rho[2, 1] = self.z
        return rho


def reduce_two_site(s, i, j):
    """Reduced density matrix of sites i < j of a one-particle state.

    Args:
        s (OneParticleState): state
        i (int): first site, 1-based
        j (int): second site, 1-based, j > i

    Returns:
        TwoSiteReducedDensity
    """
    _check_pair(s, i, j)
    phi_i, phi_j = s.amplitudes[i - 1], s.amplitudes[j - 1]
    w1 = float(abs(phi_j) ** 2)
    w2 = float(abs(phi_i) ** 2)
    v = max(1. - w1 - w2, 0.)
    return TwoSiteReducedDensity(v=v, u=0., w1=w1, w2=w2,
                                 z=complex(phi_i * np.conj(phi_j)))


SIGMA_YY = np.kron(np.array([[0., -1j], [1j, 0.]]), np.array([[0., -1j], [1j, 0.]]))


def wootters_concurrence(rho, oracle=False):
    """Concurrence of a number-conserving two-qubit block.

    Args:
        rho (TwoSiteReducedDensity): block
        oracle (bool): compute max(sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4), 0)
            from the eigenvalues of rho * rho_tilde instead of the block form

    Returns:
        float: concurrence in [0, 1]
    """
    if not isinstance(rho, TwoSiteReducedDensity):
        raise InvalidDensity("expected a TwoSiteReducedDensity")
    if not oracle:
        return 2. * max(abs(rho.z) - np.sqrt(max(rho.u * rho.v, 0.)), 0.)

    # sqrt(eig(rho rho_tilde)) are the singular values of W^T (Y x Y) W, with W the
    # subnormalized eigenvectors of rho; null directions are dropped before the root
    probs, vecs = np.linalg.eigh(rho.matrix())
    keep = probs > RANK_TOL
    w = vecs[:, keep] * np.sqrt(probs[keep])[np.newaxis, :]
    tau = w.T @ SIGMA_YY @ w
    roots = np.zeros(4)
    roots[:tau.shape[0]] = np.linalg.svd(tau, compute_uv=False)
    roots = np.sort(roots)[::-1]
    return float(max(roots[0] - roots[1] - roots[2] - roots[3], 0.))


"""Concurrence measures
"""

def num_pairs(n):
    """d = N(N-1)/2."""
    return n * (n - 1) // 2


def pair_concurrence(s, i, j):
    """C_ij = 2 |phi_i| |phi_j| for sites i < j (1-based)."""
    _check_pair(s, i, j)
    return float(2. * s.magnitudes[i - 1] * s.magnitudes[j - 1])


def pair_matrix(s):
    """Upper-triangular N x N array of C_ij (zero on and below the diagonal)."""
    _require_pairs(s)
    mags = s.magnitudes
    return np.triu(2. * np.outer(mags, mags), k=1)


def average_concurrence(s):
    """<C> = ((sum_i |phi_i|)^2 - 1) / d."""
    _require_pairs(s)
    return float((np.sum(s.magnitudes) ** 2 - 1.) / num_pairs(s.n_sites))


def renyi_half(s):
    """Renyi entropy of order 1/2 of p_i = |phi_i|^2, i.e. 2 ln sum |phi_i|."""
    _require_pairs(s)
    return float(2. * np.log(np.sum(s.magnitudes)))


def participation_exponent(s):
    """exp(S_1/2): effective number of occupied sites, between 1 and N."""
    return float(np.exp(renyi_half(s)))


def neighbor_concurrence(s, r):
    """r-th neighbor average (1/N) sum_i C_{i, i+r}, indices wrapping mod N."""
    _require_pairs(s)
    if not 1 <= r <= s.n_sites - 1:
        raise IndexError("r = {} outside 1..{}".format(r, s.n_sites - 1))
    mags = s.magnitudes
    return float(2. * np.mean(mags * np.roll(mags, -r)))


@dataclass(frozen=True)
class ConcurrenceSummary:
    """Pairwise concurrence digest of one state.

    Args:
        n_sites (int): N
        average (float): <C>
        neighbor_profile (array): C_r for r = 1..floor(N/2)
        magnitudes (array): |phi_l|, from which pair_values is rebuilt
    """
    n_sites: int
    average: float
    neighbor_profile: np.ndarray
    magnitudes: np.ndarray

    @property
    def pair_values(self):
        """Upper-triangular C_ij; built on demand to keep large spectra light."""
        return np.triu(2. * np.outer(self.magnitudes, self.magnitudes), k=1)


def summarize(s):
    """ConcurrenceSummary of a single state."""
    return summarize_columns(s.amplitudes[:, np.newaxis])[0]


def summarize_columns(vectors):
    """ConcurrenceSummary for every column of an N x M array of normalized states.

    Args:
        vectors (array): columns are amplitude vectors

    Returns:
        list: one ConcurrenceSummary per column
    """
    mags = np.abs(np.asarray(vectors))
    n = mags.shape[0]
    if n < 2:
        raise InvalidState("pairwise measures need N >= 2")
    averages = (np.sum(mags, axis=0) ** 2 - 1.) / num_pairs(n)
    profile = np.array([2. * np.mean(mags * np.roll(mags, -r, axis=0), axis=0)
                        for r in range(1, n // 2 + 1)]).reshape(n // 2, -1)
    return [ConcurrenceSummary(n_sites=n, average=float(averages[k]),
                               neighbor_profile=frozen_array(profile[:, k]),
                               magnitudes=frozen_array(mags[:, k]))
            for k in range(mags.shape[1])]
