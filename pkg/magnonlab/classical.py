"""Classical kicked Harper map of the unit torus.

q' = q - tau sin(2 pi p)
p' = p + tau g sin(2 pi q')

Both half-steps are shears, so the map is canonical (area preserving).
"""

from dataclasses import dataclass

import numpy as np

from magnonlab.numerics import gaussian_rng

FD_STEP = 1e-6


def reduce_mod1(x):
    """Reduce to [0, 1); guards the x mod 1 == 1.0 rounding case for tiny negatives."""
    r = np.mod(x, 1.)
    return np.where(r >= 1., 0., r)


@dataclass(frozen=True)
class TorusPoint:
    """Phase-space point, both coordinates reduced mod 1."""
    q: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, 'q', float(reduce_mod1(self.q)))
        object.__setattr__(self, 'p', float(reduce_mod1(self.p)))


def _step_unwrapped(q, p, tau, g):
    q_next = q - tau * np.sin(2. * np.pi * p)
    p_next = p + tau * g * np.sin(2. * np.pi * q_next)
    return q_next, p_next


def map_step(pt, tau, g):
    """One kick: q first, then p using the updated q.

    Args:
        pt (TorusPoint): current point
        tau (float): kick period
        g (float): kick strength

    Returns:
        TorusPoint
    """
    q, p = _step_unwrapped(pt.q, pt.p, tau, g)
    return TorusPoint(q, p)


def inverse_step(pt, tau, g):
    """Undo map_step: p backward first, then q."""
    p = pt.p - tau * g * np.sin(2. * np.pi * pt.q)
    q = pt.q + tau * np.sin(2. * np.pi * p)
    return TorusPoint(q, p)


def portrait(tau, g, seeds, n_iter):
    """Orbits of several seeds, iterated together.

    Args:
        tau (float): kick period
        g (float): kick strength
        seeds (list): TorusPoint seeds
        n_iter (int): points per orbit, the seed included

    Returns:
        array: shape (len(seeds), n_iter, 2) of (q, p)
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    q = np.array([s.q for s in seeds], dtype=float)
    p = np.array([s.p for s in seeds], dtype=float)
    orbits = np.empty((len(seeds), n_iter, 2))
    orbits[:, 0, 0], orbits[:, 0, 1] = q, p
    for n in range(1, n_iter):
        q, p = _step_unwrapped(q, p, tau, g)
        q, p = reduce_mod1(q), reduce_mod1(p)
        orbits[:, n, 0], orbits[:, n, 1] = q, p
    return orbits


def default_seeds(n_line=20, n_random=10, seed=0):
    """Evenly spaced seeds on the q = 1/2 line plus uniform random seeds.

    Args:
        n_line (int): seeds at p = (k + 1/2)/n_line on q = 1/2
        n_random (int): extra seeds drawn from the PCG64 stream of `seed`
        seed (int): seed of the random part

    Returns:
        list: TorusPoint seeds
    """
    seeds = [TorusPoint(0.5, (k + 0.5) / n_line) for k in range(n_line)]
    rng = gaussian_rng(seed)
    for q, p in rng.random((n_random, 2)):
        seeds.append(TorusPoint(q, p))
    return seeds


def grid_coverage(orbit, bins=20):
    """Fraction of the bins x bins cells of the torus visited by an orbit.

    Args:
        orbit (array): shape (n, 2) of (q, p)

    Returns:
        float: visited fraction in (0, 1]
    """
    orbit = np.asarray(orbit)
    cells = np.minimum((orbit * bins).astype(int), bins - 1)
    visited = np.unique(cells[:, 0] * bins + cells[:, 1])
    return visited.size / float(bins * bins)


def jacobian_check(pt, tau, g, step=FD_STEP):
    """Determinant of the central-difference Jacobian of map_step at pt.

    Analytically 1 everywhere.

    Returns:
        float: det of d(q', p')/d(q, p)
    """
    jac = np.empty((2, 2))
    for col, (dq, dp) in enumerate(((step, 0.), (0., step))):
        plus = _step_unwrapped(pt.q + dq, pt.p + dp, tau, g)
        minus = _step_unwrapped(pt.q - dq, pt.p - dp, tau, g)
        jac[:, col] = (np.array(plus) - np.array(minus)) / (2. * step)
    return float(np.linalg.det(jac))
