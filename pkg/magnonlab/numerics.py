"""Numerical kernels: dense eigensolvers, twisted DFT, Bessel K0, quadrature,
KS distance and seeded Gaussian streams.

All functions are pure; returned containers are read-only and may be shared
between threads or processes.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.special
import scipy.stats
from scipy import integrate

from magnonlab.utils import (InvalidMatrix, ConvergenceFailure, DomainError,
                             QuadratureFailure, EmptySample, ShapeError)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
RESIDUAL_TOL = 1e-8


def frozen_array(arr):
    """Read-only copy of an array."""
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense Hermitian N x N operator.

    Args:
        entries (array): complex or real square array with entries[i, j]
            equal to conj(entries[j, i]) within 1e-12
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = _square_finite(self.entries)
        if np.max(np.abs(entries - entries.conj().T), initial=0.) > HERMITIAN_TOL:
            raise InvalidMatrix("matrix is not Hermitian within {}".format(HERMITIAN_TOL))
        object.__setattr__(self, 'entries', frozen_array(entries))

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def is_real(self):
        return not np.iscomplexobj(self.entries) or not np.any(self.entries.imag)


@dataclass(frozen=True)
class UnitaryMatrix:
    """Dense unitary N x N operator with ||U^dag U - I||_max <= 1e-10.

    Args:
        entries (array): complex square array
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = _square_finite(self.entries).astype(complex)
        defect = entries.conj().T @ entries - np.eye(entries.shape[0])
        if np.max(np.abs(defect)) > UNITARY_TOL:
            raise InvalidMatrix("matrix is not unitary within {}".format(UNITARY_TOL))
        object.__setattr__(self, 'entries', frozen_array(entries))

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralSet:
    """Eigenvalues (ascending energies or eigenphases in [-pi, pi)) with
    eigenvector columns and the largest eigen-residual.

    Args:
        values (array): length N real array, sorted ascending
        vectors (array): N x N array, column n belongs to values[n]
        max_residual (float): max_n ||M v_n - lambda_n v_n||_2
    """
    values: np.ndarray
    vectors: np.ndarray
    max_residual: float

    def __post_init__(self):
        object.__setattr__(self, 'values', frozen_array(self.values))
        object.__setattr__(self, 'vectors', frozen_array(self.vectors))

    def __len__(self):
        return len(self.values)


def _square_finite(entries):
    entries = np.asarray(entries)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
        raise InvalidMatrix("expected a non-empty square matrix, got shape {}".format(entries.shape))
    if not np.all(np.isfinite(entries)):
        raise InvalidMatrix("matrix has non-finite entries")
    return entries


def fix_phases(vectors):
    """Rotate each column so its largest-magnitude entry is real positive.

    Ties are broken by the lowest index. Real input stays real.

    Args:
        vectors (array): N x M eigenvector columns

    Returns:
        array: phase-fixed copy
    """
    vectors = np.array(vectors, copy=True)
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    phases = np.ones_like(pivots)
    nonzero = np.abs(pivots) > 0
    phases[nonzero] = np.abs(pivots[nonzero]) / pivots[nonzero]
    vectors *= phases[np.newaxis, :]
    return vectors


"""Householder tridiagonalization and implicit QL
"""

def householder_tridiagonal(a):
    """Reduce a real symmetric matrix to tridiagonal form.

    Args:
        a (array): real symmetric N x N matrix

    Returns:
        tuple: (diagonal, off-diagonal, Q) with Q^T a Q tridiagonal
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k+1:, k]
        norm = np.linalg.norm(x)
        if norm == 0.:
            continue
        alpha = -np.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.:
            continue
        v /= vnorm
        a[k+1:, :] -= 2. * np.outer(v, v @ a[k+1:, :])
        a[:, k+1:] -= 2. * np.outer(a[:, k+1:] @ v, v)
        q[:, k+1:] -= 2. * np.outer(q[:, k+1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, 1).copy(), q


def tridiagonal_ql(d, e, z, max_iter=50):
    """Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.

    Args:
        d (array): diagonal, length N
        e (array): off-diagonal, e[i] couples d[i] and d[i+1], length N-1
        z (array): N x N matrix the rotations are accumulated into
        max_iter (int): iteration cap per eigenvalue

    Returns:
        tuple: (eigenvalues, eigenvector columns), unsorted
    """
    d = np.array(d, dtype=float, copy=True)
    e = np.append(np.array(e, dtype=float), 0.)
    z = np.array(z, dtype=float, copy=True)
    n = len(d)
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m+1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceFailure("QL did not converge for eigenvalue {} "
                                         "within {} iterations".format(l, max_iter))
            g = (d[l+1] - d[l]) / (2. * e[l])
            r = np.hypot(g, 1.)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.
            p = 0.
            i = m - 1
            restart = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i+1] = r
                if r == 0.:
                    d[i+1] -= p
                    e[m] = 0.
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i+1] - p
                r = (d[i] - g) * s + 2. * c * b
                p = s * r
                d[i+1] = g + p
                g = c * r - b
                zi1 = z[:, i+1].copy()
                z[:, i+1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.
    return d, z


def _eigh_householder(entries):
    if not np.iscomplexobj(entries) or not np.any(entries.imag):
        d, e, q = householder_tridiagonal(np.real(entries))
        values, vectors = tridiagonal_ql(d, e, q)
        order = np.argsort(values, kind='stable')
        return values[order], vectors[:, order]

    # complex Hermitian A + iB through the real embedding [[A, -B], [B, A]]
    n = entries.shape[0]
    a, b = entries.real, entries.imag
    big = np.block([[a, -b], [b, a]])
    d, e, q = householder_tridiagonal(big)
    values, vectors = tridiagonal_ql(d, e, q)
    order = np.argsort(values, kind='stable')
    values, vectors = values[order], vectors[:, order]
    complex_vecs = vectors[:n, :] + 1j * vectors[n:, :]

    span = max(values[-1] - values[0], 1.)
    tol = 1e-9 * span
    out_vals, out_vecs = [], []
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and values[stop] - values[stop-1] <= tol:
            stop += 1
        size = stop - start
        if size % 2:
            raise ConvergenceFailure("unpaired eigenvalue cluster of size {} in the "
                                     "real embedding".format(size))
        u, _, _ = np.linalg.svd(complex_vecs[:, start:stop], full_matrices=False)
        mult = size // 2
        out_vecs.append(u[:, :mult])
        out_vals.extend([values[start:stop].mean()] * mult)
        start = stop
    return np.array(out_vals), np.hstack(out_vecs)


def eig_hermitian(m, method='lapack'):
    """Eigendecomposition of a Hermitian matrix.

    Args:
        m (HermitianMatrix or array): operator
        method (str): 'lapack' (scipy.linalg.eigh) or 'householder'
            (Householder tridiagonalization + implicit QL, complex input via
            the 2N real embedding)

    Returns:
        SpectralSet: ascending eigenvalues and phase-fixed eigenvectors
    """
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(m)
    entries = np.asarray(m.entries)
    if m.is_real:
        entries = np.real(entries)

    if method == 'lapack':
        try:
            values, vectors = scipy.linalg.eigh(entries)
        except np.linalg.LinAlgError as err:
            raise ConvergenceFailure("eigh failed: {}".format(err))
    elif method == 'householder':
        values, vectors = _eigh_householder(entries)
    else:
        raise ValueError("unknown method {!r}".format(method))

    vectors = fix_phases(vectors)
    residual = _residual(entries, values, vectors)
    scale = max(np.max(np.abs(entries)), 1.)
    if residual > RESIDUAL_TOL * scale:
        warnings.warn("Hermitian eigen-residual {:.3g} above tolerance".format(residual))
    return SpectralSet(values=values, vectors=vectors, max_residual=residual)


def _residual(entries, values, vectors):
    res = entries @ vectors - vectors * values[np.newaxis, :]
    return float(np.max(np.linalg.norm(res, axis=0), initial=0.))


def _clusters(values, tol):
    """Split sorted values into runs whose consecutive gaps are <= tol."""
    breaks = np.where(np.diff(values) > tol)[0] + 1
    return np.split(np.arange(len(values)), breaks)


def wrap_phase(theta):
    theta = np.mod(np.asarray(theta) + np.pi, 2. * np.pi) - np.pi
    return np.where(theta >= np.pi, theta - 2. * np.pi, theta)


def eig_unitary(u, method='lapack', cluster_tol=2e-6):
    """Eigendecomposition of a unitary matrix through its commuting Hermitian pair.

    A = (U + U^dag)/2 is diagonalized first; each cluster of A-eigenvalues is
    resolved by B = (U - U^dag)/2i restricted to the cluster, and clusters
    still degenerate in B are resolved once more by A restricted to them.

    Args:
        u (UnitaryMatrix or array): operator
        method (str): Hermitian backend, see eig_hermitian
        cluster_tol (float): gap below which A-eigenvalues share a cluster

    Returns:
        SpectralSet: eigenphases in [-pi, pi), ascending
    """
    if not isinstance(u, UnitaryMatrix):
        u = UnitaryMatrix(u)
    entries = u.entries
    a_op = (entries + entries.conj().T) / 2.
    b_op = (entries - entries.conj().T) / 2j
    a_op = (a_op + a_op.conj().T) / 2.
    b_op = (b_op + b_op.conj().T) / 2.

    base = eig_hermitian(HermitianMatrix(a_op), method=method)
    columns = []
    for cluster in _clusters(base.values, cluster_tol):
        vc = np.asarray(base.vectors[:, cluster], dtype=complex)
        if len(cluster) == 1:
            columns.append(vc)
            continue
        sub_b = vc.conj().T @ b_op @ vc
        sub_b = (sub_b + sub_b.conj().T) / 2.
        b_vals, w = scipy.linalg.eigh(sub_b)
        vb = vc @ w
        for inner in _clusters(b_vals, cluster_tol):
            vi = vb[:, inner]
            if len(inner) > 1:
                sub_a = vi.conj().T @ a_op @ vi
                sub_a = (sub_a + sub_a.conj().T) / 2.
                _, wa = scipy.linalg.eigh(sub_a)
                vi = vi @ wa
            columns.append(vi)

    vectors = np.hstack(columns)
    rayleigh = np.einsum('ij,ij->j', vectors.conj(), entries @ vectors)
    phases = wrap_phase(np.angle(rayleigh))
    order = np.argsort(phases, kind='stable')
    phases, vectors = phases[order], fix_phases(vectors[:, order])

    residual = _residual(entries, np.exp(1j * phases), vectors)
    if residual > RESIDUAL_TOL:
        warnings.warn("unitary eigen-residual {:.3g} above tolerance".format(residual))
    return SpectralSet(values=phases, vectors=vectors, max_residual=residual)


"""Twisted discrete Fourier transform
"""

def dft_matrix(n, beta=0.):
    """F[k, j] = exp(2 pi i (k + beta) j / N) / sqrt(N), with j, k = 1..N."""
    idx = np.arange(1, n + 1)
    return np.exp(2j * np.pi * np.outer(idx + beta, idx) / n) / np.sqrt(n)


def twisted_dft(x, beta=0., inverse=False):
    """Site-to-momentum transform with twisted momenta (k + beta)/N.

    Args:
        x (array): complex vector of length N (or N x M columns)
        beta (float): twist
        inverse (bool): apply the adjoint (momentum-to-site)

    Returns:
        array: transformed vector, same shape as x
    """
    x = np.asarray(x)
    if x.ndim not in (1, 2) or x.shape[0] < 1:
        raise ShapeError("expected a vector or column stack, got shape {}".format(x.shape))
    f = dft_matrix(x.shape[0], beta)
    if inverse:
        return f.conj().T @ x
    return f @ x


"""Modified Bessel function K0
"""

EULER_GAMMA = 0.57721566490153286061
K0_SWITCH = 8.


def _k0_series(x):
    # K0 = -(ln(x/2) + gamma) I0 + sum_k (x^2/4)^k / (k!)^2 H_k
    y = x * x / 4.
    term = np.ones_like(x)
    i0 = np.ones_like(x)
    tail = np.zeros_like(x)
    harmonic = 0.
    for k in range(1, 60):
        term = term * y / (k * k)
        harmonic += 1. / k
        i0 = i0 + term
        tail = tail + term * harmonic
    return -(np.log(x / 2.) + EULER_GAMMA) * i0 + tail


def _k0_asymptotic(x):
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 30):
        nxt = term * (-(2. * k - 1.) ** 2) / (k * 8. * x)
        if np.all(np.abs(nxt) >= np.abs(term)):
            break
        term = np.where(np.abs(nxt) < np.abs(term), nxt, 0.)
        total = total + term
    return np.sqrt(np.pi / (2. * x)) * np.exp(-x) * total


def bessel_k0(x, method='scipy'):
    """Modified Bessel function of the second kind, order zero.

    Args:
        x (float or array): argument, strictly positive
        method (str): 'scipy' (scipy.special.k0) or 'series' (power series
            below x=8, asymptotic expansion above)

    Returns:
        float or array: K0(x)
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("K0 is defined for x > 0 only")
    if method == 'scipy':
        out = scipy.special.k0(arr)
    elif method == 'series':
        flat = np.atleast_1d(arr).ravel()
        out = np.empty_like(flat)
        small = flat <= K0_SWITCH
        out[small] = _k0_series(flat[small])
        out[~small] = _k0_asymptotic(flat[~small])
        out = out.reshape(arr.shape)
    else:
        raise ValueError("unknown method {!r}".format(method))
    return float(out) if np.ndim(x) == 0 else out


"""Quadrature
"""

QUAD_CUTOFF = 60.


def quadrature(f, a, b, tol=1e-9, limit=200):
    """Adaptive quadrature of a scalar function on (a, b), b possibly infinite.

    Intervals are split at 1 (integrable log singularities near 0 are left
    to the extrapolating QAGS rule) and at 60, beyond which the infinite tail
    goes to the QAGI rule.

    Args:
        f (callable): real integrand of one float
        a (float): lower limit
        b (float): upper limit, may be np.inf
        tol (float): absolute tolerance of the total
        limit (int): subdivision cap per piece

    Returns:
        float: integral estimate
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if b < a:
        return -quadrature(f, b, a, tol, limit)
    cuts = [a] + [c for c in (1., QUAD_CUTOFF) if a < c < b] + [b]
    pieces = list(zip(cuts[:-1], cuts[1:]))
    total = 0.
    for lo, hi in pieces:
        with warnings.catch_warnings():
            warnings.simplefilter('error', integrate.IntegrationWarning)
            try:
                value, err = integrate.quad(f, lo, hi, epsabs=tol / (4. * len(pieces)),
                                            epsrel=1e-11, limit=limit)
            except integrate.IntegrationWarning as warn:
                raise QuadratureFailure("quadrature on ({}, {}) failed: {}".format(lo, hi, warn))
        if not np.isfinite(value):
            raise QuadratureFailure("non-finite integral on ({}, {})".format(lo, hi))
        total += value
    return total


"""Kolmogorov-Smirnov distance
"""

def ks_statistic(sample, cdf):
    """Two-sided KS distance sup |F_n - F| between a sample and a CDF.

    Args:
        sample (array): real sample
        cdf (callable): vectorized CDF

    Returns:
        float: KS distance in [0, 1]
    """
    sample = np.asarray(sample, dtype=float).ravel()
    if sample.size == 0:
        raise EmptySample("KS distance of an empty sample")
    return float(scipy.stats.kstest(sample, cdf, method='asymp').statistic)


"""Seeded Gaussian streams
"""

def gaussian_rng(seed):
    """Deterministic standard-normal stream.

    The stream is numpy's PCG64 bit generator seeded through
    SeedSequence(seed); draw with `.standard_normal(size)`. The mapping
    seed -> stream is fixed by numpy's stability guarantee for PCG64.

    Args:
        seed (int): non-negative seed

    Returns:
        numpy.random.Generator
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def split_seeds(master, count):
    """Independent child seeds for parallel callers.

    Child i is SeedSequence(master).spawn(count)[i], reduced to one 64-bit
    integer with generate_state.

    Args:
        master (int): master seed
        count (int): number of children

    Returns:
        list: `count` integers
    """
    children = np.random.SeedSequence(int(master)).spawn(int(count))
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]
