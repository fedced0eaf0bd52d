"""Random-matrix predictions for pairwise concurrence of chaotic states.

In the large-N limit eigenvector components become independent: real
Gaussian for GOE (time-reversal symmetric), complex Gaussian for GUE. The
squared components then follow the Porter-Thomas or exponential law and the
scaled concurrence c = N C_ij has density (1/pi) K0(c/2) (GOE) or c K0(c)
(GUE), with means 4/pi and pi/2.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.special
from scipy import integrate

from magnonlab import numerics
from magnonlab.onepstate import OneParticleState
from magnonlab.utils import DomainError, ShapeError, QuadratureFailure

HIST_BINS = 60
HIST_UPPER = 6.


class EnsembleKind(enum.Enum):
    """Universality class; the symplectic ensemble is not covered."""
    GOE = 'GOE'
    GUE = 'GUE'

    @classmethod
    def parse(cls, kind):
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).upper())
        except ValueError:
            raise ValueError("unknown ensemble {!r}, expected GOE or GUE".format(kind))


@dataclass(frozen=True)
class DistributionComparison:
    """Pooled scaled concurrences of a set of states against a predicted law.

    Args:
        kind (EnsembleKind): law compared against
        sample_size (int): number of states pooled
        ks (float): KS distance to the predicted CDF
        mean_scaled (float): empirical mean of c = N C
        predicted_mean (float): 4/pi (GOE) or pi/2 (GUE)
        fraction_above_2 (float): empirical fraction of pairs with c > 2
    """
    kind: EnsembleKind
    sample_size: int
    ks: float
    mean_scaled: float
    predicted_mean: float
    fraction_above_2: float


PREDICTED_MEAN = {EnsembleKind.GOE: 4. / np.pi, EnsembleKind.GUE: np.pi / 2.}


def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("{} must be > 0".format(name))
    return arr


def _scalar_or_array(template, out):
    return float(out) if np.ndim(template) == 0 else out


"""Densities
"""

def component_density(kind, x, n):
    """Density of x = |phi_j|^2 for an N-component random state.

    GOE: sqrt(N / (2 pi x)) exp(-N x / 2) (Porter-Thomas); GUE: N exp(-N x).
    """
    kind = EnsembleKind.parse(kind)
    arr = _positive(x, 'x')
    if kind is EnsembleKind.GOE:
        out = np.sqrt(n / (2. * np.pi * arr)) * np.exp(-n * arr / 2.)
    else:
        out = n * np.exp(-n * arr)
    return _scalar_or_array(x, out)


def concurrence_pdf(kind, c):
    """Density of the scaled concurrence c = N C: (1/pi) K0(c/2) or c K0(c)."""
    kind = EnsembleKind.parse(kind)
    arr = _positive(c, 'c')
    if kind is EnsembleKind.GOE:
        out = numerics.bessel_k0(arr / 2.) / np.pi
    else:
        out = arr * numerics.bessel_k0(arr)
    return _scalar_or_array(c, out)


def concurrence_tail(kind, c):
    """Large-c asymptotic density: exp(-c/2)/sqrt(pi c) or sqrt(pi c / 2) exp(-c)."""
    kind = EnsembleKind.parse(kind)
    arr = _positive(c, 'c')
    if kind is EnsembleKind.GOE:
        out = np.exp(-arr / 2.) / np.sqrt(np.pi * arr)
    else:
        out = np.sqrt(np.pi * arr / 2.) * np.exp(-arr)
    return _scalar_or_array(c, out)


def _closed_cdf(kind, c):
    c = np.asarray(c, dtype=float)
    safe = np.where(c > 0, c, 1.)
    if kind is EnsembleKind.GUE:
        # d/dc [-c K1(c)] = c K0(c), and c K1(c) -> 1 at 0
        out = 1. - safe * scipy.special.k1(safe)
    else:
        # integral_0^u K0 = (pi u / 2)[K0 L_{-1} + K1 L_0], L_{-1} = L_1 + 2/pi
        u = safe / 2.
        l_minus = scipy.special.modstruve(1, u) + 2. / np.pi
        out = u * (scipy.special.k0(u) * l_minus
                   + scipy.special.k1(u) * scipy.special.modstruve(0, u))
        # large u: the product form loses digits, the tail integral does not
        far = u > 30.
        if np.any(far):
            out = np.where(far, 1. - _goe_far_tail(u), out)
    out = np.where(c > 0, np.clip(out, 0., 1.), 0.)
    return out


def _goe_far_tail(u):
    # (2/pi) integral_u^inf K0 ~ (2/pi) sqrt(pi/(2u)) e^{-u} (1 - 5/(8u))
    u = np.asarray(u, dtype=float)
    return (2. / np.pi) * np.sqrt(np.pi / (2. * u)) * np.exp(-u) * (1. - 5. / (8. * u))


def concurrence_cdf(kind, c, method='quadrature'):
    """P(scaled concurrence <= c).

    Args:
        kind (EnsembleKind or str): GOE or GUE
        c (float or array): c >= 0 (np.inf allowed)
        method (str): 'quadrature' integrates concurrence_pdf on (0, c];
            'closed' uses c K1(c) (GUE) and Bessel-Struve products (GOE),
            vectorized for large samples

    Returns:
        float or array: CDF values in [0, 1]
    """
    kind = EnsembleKind.parse(kind)
    arr = np.asarray(c, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("c must be >= 0")
    if method == 'closed':
        out = np.where(np.isinf(arr), 1., _closed_cdf(kind, np.where(np.isinf(arr), 1., arr)))
    elif method == 'quadrature':
        flat = np.atleast_1d(arr).ravel()
        out = np.empty_like(flat)
        for idx, value in enumerate(flat):
            if value == 0.:
                out[idx] = 0.
            else:
                out[idx] = min(max(numerics.quadrature(
                    lambda t: concurrence_pdf(kind, t), 0., value, tol=1e-10), 0.), 1.)
        out = out.reshape(arr.shape)
    else:
        raise ValueError("unknown method {!r}".format(method))
    return _scalar_or_array(c, out)


def fraction_above(kind, c=2.):
    """Fraction of pairs with scaled concurrence above c (above 2/N for c = 2)."""
    kind = EnsembleKind.parse(kind)
    return float(numerics.quadrature(lambda t: concurrence_pdf(kind, t), c, np.inf, tol=1e-10))


def concurrence_moment(kind, order=1):
    """E[c^order] by quadrature."""
    kind = EnsembleKind.parse(kind)
    return float(numerics.quadrature(lambda t: t ** order * concurrence_pdf(kind, t),
                                     0., np.inf, tol=1e-10))


def concurrence_mean(kind):
    """E[c]: 4/pi (GOE), pi/2 (GUE)."""
    return concurrence_moment(kind, 1)


def finite_n_average(kind, n):
    """Exact finite-N average concurrence from the uniform sphere measure.

    GOE: real components on the N-sphere, reduced density of two components.
    GUE: real and imaginary parts on the 2N-sphere, reduced density of four.
    The integrals come out as 4/(pi N) and pi/(2N).

    Args:
        kind (EnsembleKind or str): GOE or GUE
        n (int): number of sites, >= 3

    Returns:
        float: <C>
    """
    kind = EnsembleKind.parse(kind)
    if n < 3:
        raise DomainError("sphere averages need N >= 3")
    if kind is EnsembleKind.GOE:
        # P^(N,2) = Gamma(N/2) / (pi Gamma(N/2 - 1)) (1 - r^2)^((N-4)/2);
        # angular integral of |sin 2 theta| r^2 over the circle gives 4 r^2
        norm = np.exp(scipy.special.gammaln(n / 2.) - scipy.special.gammaln(n / 2. - 1.)) / np.pi
        expo = (n - 4) / 2.
        # (1 - r^2)^expo = (1 + r)^expo (1 - r)^expo, the last factor as a QAWS weight
        radial = integrate.quad(lambda r: r ** 3 * (1. + r) ** expo, 0., 1.,
                                weight='alg', wvar=(0., expo),
                                epsabs=1e-14, epsrel=1e-12)[0]
        return float(norm * 4. * radial)

    # P^(2N,4) = Gamma(N) / (pi^2 Gamma(N - 2)) (1 - r1^2 - r2^2)^(N-3),
    # polar in each complex component: dx1 dx2 = 2 pi r1 dr1
    norm = np.exp(scipy.special.gammaln(n) - scipy.special.gammaln(n - 2.)) / np.pi ** 2
    inner, err = integrate.dblquad(
        lambda r2, r1: 2. * r1 * r2 * r1 * r2 * (1. - r1 * r1 - r2 * r2) ** (n - 3),
        0., 1., lambda r1: 0., lambda r1: np.sqrt(max(1. - r1 * r1, 0.)),
        epsabs=1e-14, epsrel=1e-12)
    if not np.isfinite(inner):
        raise QuadratureFailure("sphere average did not converge")
    return float(norm * (2. * np.pi) ** 2 * inner)


"""Random states
"""

def sample_state(kind, n, seed):
    """Random one-particle state with independent Gaussian components.

    GOE: n real standard normals; GUE: n complex normals with independent real
    and imaginary parts. Normalized to unit norm.

    Args:
        kind (EnsembleKind or str): GOE or GUE
        n (int): number of sites, >= 2
        seed (int): seed of the PCG64 stream

    Returns:
        OneParticleState
    """
    kind = EnsembleKind.parse(kind)
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = numerics.gaussian_rng(seed)
    if kind is EnsembleKind.GOE:
        amps = rng.standard_normal(n)
    else:
        amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return OneParticleState.from_amplitudes(amps, label='{} seed {}'.format(kind.value, seed))


def sample_states(kind, n, count, seed):
    """`count` independent states; state i uses split_seeds(seed, count)[i]."""
    return [sample_state(kind, n, s) for s in numerics.split_seeds(seed, count)]


def pooled_concurrences(states):
    """All scaled pair concurrences N C_ij, i < j, of every state, pooled.

    Args:
        states (iterable): OneParticleState or ConcurrenceSummary objects;
            only `n_sites` and `magnitudes` are read

    Raises:
        ShapeError: states of different lengths
    """
    states = list(states)
    if len(states) == 0:
        raise ValueError("need at least one state")
    n = states[0].n_sites
    if any(s.n_sites != n for s in states):
        raise ShapeError("all states must have the same number of sites")
    iu = np.triu_indices(n, k=1)
    mags = np.array([s.magnitudes for s in states])
    pooled = 2. * n * mags[:, iu[0]] * mags[:, iu[1]]
    return pooled.ravel()


def concurrence_histogram(values, bins=HIST_BINS, upper=HIST_UPPER):
    """Density-normalized histogram of scaled concurrences on (0, upper].

    The normalization is over the whole pooled sample, so bins integrate to
    the fraction of pairs with c <= upper.

    Returns:
        tuple: (bin centers, densities)
    """
    values = np.asarray(values, dtype=float)
    edges = np.linspace(0., upper, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    width = edges[1] - edges[0]
    density = counts / (values.size * width) if values.size else np.zeros(bins)
    return (edges[:-1] + edges[1:]) / 2., density


def compare_ensemble(states, kind):
    """Pool pair concurrences of all states and compare with the predicted law.

    Args:
        states (list): OneParticleState (or ConcurrenceSummary) list, all
            with the same N
        kind (EnsembleKind or str): law to compare against

    Returns:
        DistributionComparison
    """
    kind = EnsembleKind.parse(kind)
    states = list(states)
    pooled = pooled_concurrences(states)
    ks = numerics.ks_statistic(pooled, lambda c: concurrence_cdf(kind, c, method='closed'))
    return DistributionComparison(kind=kind, sample_size=len(states), ks=ks,
                                  mean_scaled=float(np.mean(pooled)),
                                  predicted_mean=PREDICTED_MEAN[kind],
                                  fraction_above_2=float(np.mean(pooled > 2.)))
