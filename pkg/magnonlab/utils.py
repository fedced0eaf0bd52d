"""Utilities: exceptions, parallel sweeps, configuration and result tables."""

import os
import hashlib
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import pathos.multiprocessing as mp
from tqdm import tqdm


"""Exceptions
"""

class MagnonLabError(Exception):
    """Base class for every error raised by magnonlab."""


class ConfigError(MagnonLabError, ValueError):
    """Invalid experiment configuration.

    Args:
        key (str): offending configuration key
        message (str): what is wrong with it
    """
    def __init__(self, key, message):
        self.key = key
        super(ConfigError, self).__init__("{}: {}".format(key, message))


class DomainError(MagnonLabError, ValueError):
    """Argument outside the domain of a function."""


class InvalidMatrix(MagnonLabError, ValueError):
    """Operator is non-finite, non-square, non-Hermitian or non-unitary."""


class InvalidState(MagnonLabError, ValueError):
    """Amplitude vector that is not a normalized one-particle state."""


class InvalidDensity(MagnonLabError, ValueError):
    """Two-site block violating trace or positivity."""


class ShapeError(MagnonLabError, ValueError):
    """Mismatched array sizes."""


class EmptySample(MagnonLabError, ValueError):
    """Statistic requested on an empty sample."""


class NumericalFailure(MagnonLabError, RuntimeError):
    """A numerical kernel did not reach its tolerance."""


class ConvergenceFailure(NumericalFailure):
    """Eigensolver iteration cap exceeded."""


class QuadratureFailure(NumericalFailure):
    """Quadrature did not reach the requested tolerance."""


"""Parallel sweeps
"""

THREADS_ENV = 'MAGNON_LAB_THREADS'


def num_workers(requested=None):
    """Number of worker processes for a sweep.

    Args:
        requested (int): (optional) explicit worker count. If None, read
            MAGNON_LAB_THREADS; unset or 0 means all cores.

    Returns:
        int: worker count, at least 1
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV, '0').strip() or '0'
        try:
            requested = int(raw)
        except ValueError:
            raise ConfigError(THREADS_ENV, "must be an integer, got {!r}".format(raw))
    if requested < 0:
        raise ConfigError(THREADS_ENV, "must be >= 0")
    if requested == 0:
        requested = os.cpu_count() or 1
    return max(1, int(requested))


def parallel_map(func, items, workers=1, verbose=False, desc=None):
    """Map `func` over independent sweep points, preserving order.

    Args:
        func (callable): function of one sweep point
        items (iterable): sweep points
        workers (int): number of processes; 1 runs in-process
        verbose (bool): show a progress bar
        desc (str): (optional) progress bar label

    Returns:
        list: results in the order of `items`
    """
    items = list(items)
    workers = min(int(workers), max(len(items), 1))
    if workers <= 1:
        iterator = tqdm(items, desc=desc, disable=not verbose)
        return [func(item) for item in iterator]

    pool = mp.Pool(processes=workers)
    try:
        results = list(tqdm(pool.imap(func, items), total=len(items),
                            desc=desc, disable=not verbose))
    finally:
        pool.close()
        pool.join()
    return results


"""Configuration
"""

EXPERIMENTS = ('harper-sweep', 'harper-scaling', 'harper-energy',
               'kicked-tau', 'kicked-time', 'kicked-neighbor',
               'kicked-distribution', 'classical-portrait', 'rmt-table')

GOLDEN = (np.sqrt(5.) - 1.) / 2.

INT_KEYS = {'N', 'n_kicks', 'sample_size', 'seed', 'site', 'n_iter',
            'n_line', 'n_random'}
FLOAT_KEYS = {'g', 'sigma', 'beta', 'tau', 'gamma'}
INT_LIST_KEYS = {'n_values', 'r_values'}
FLOAT_LIST_KEYS = {'g_values', 'tau_values', 'betas', 'taus', 'sigmas'}
KNOWN_KEYS = INT_KEYS | FLOAT_KEYS | INT_LIST_KEYS | FLOAT_LIST_KEYS

# Default sizes: N=101, golden gamma, g=1 for kicked runs.
DEFAULTS = {
    'harper-sweep': dict(N=101, gamma=GOLDEN, beta=0.0, sigmas=[1.0],
                         g_values=list(np.round(np.linspace(0., 3., 31), 10))),
    'harper-scaling': dict(gamma=GOLDEN, beta=0.0, g_values=[0.9, 1.0, 1.1],
                           n_values=[101, 144, 233, 377, 610]),
    'harper-energy': dict(N=101, sigma=1.0, beta=0.0,
                          g_values=[0.1, 0.5, 1.0, 1.5]),
    'kicked-tau': dict(N=101, g=1.0, betas=[0.0, 0.2],
                       tau_values=list(np.round(np.linspace(0.05, 1.0, 20), 10))),
    'kicked-time': dict(N=101, g=1.0, beta=0.0, site=21, n_kicks=500,
                        taus=[0.05, 0.2, 0.8]),
    'kicked-neighbor': dict(N=101, g=1.0, beta=0.0,
                            r_values=list(range(1, 16, 2)),
                            tau_values=list(np.round(np.linspace(0.05, 1.0, 20), 10))),
    'kicked-distribution': dict(N=101, g=1.0, tau=0.8, betas=[0.0, 0.2]),
    'classical-portrait': dict(g=1.0, taus=[0.1, 0.3, 0.5, 0.7], n_iter=5000,
                               n_line=20, n_random=10),
    'rmt-table': dict(N=101, sample_size=500),
}


def _coerce(key, value):
    """Convert a raw string (or already-typed value) for `key`."""
    if key not in KNOWN_KEYS:
        raise ConfigError(key, "unknown parameter")
    try:
        if key in INT_KEYS:
            return int(value)
        if key in FLOAT_KEYS:
            return float(value)
        if isinstance(value, str):
            parts = [v for v in value.replace(' ', '').split(',') if v != '']
        else:
            parts = list(value)
        if key in INT_LIST_KEYS:
            return [int(v) for v in parts]
        return [float(v) for v in parts]
    except (TypeError, ValueError):
        raise ConfigError(key, "cannot parse value {!r}".format(value))


def read_config_file(filename):
    """Read a flat `key = value` configuration file.

    Args:
        filename (str): path to configuration file

    Returns:
        dict: raw string values keyed by parameter name
    """
    params = {}
    try:
        with open(filename, 'r', encoding='utf-8') as f:
            for lineno, line in enumerate(f, 1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                if '=' not in line:
                    raise ConfigError('line {}'.format(lineno),
                                      "expected key = value in {}".format(filename))
                key, value = line.split('=', 1)
                params[key.strip()] = value.strip()
    except IOError as err:
        raise ConfigError('config', "cannot read {}: {}".format(filename, err))
    return params


@dataclass
class ExperimentConfig:
    """One experiment run.

    Args:
        experiment (str): one of EXPERIMENTS
        parameters (dict): typed parameter values
        output_dir (str): directory owning all outputs of the run
        seed (int): master seed
        svg (bool): also write SVG plots
    """
    experiment: str
    parameters: dict = field(default_factory=dict)
    output_dir: str = '.'
    seed: int = 0
    svg: bool = False

    @classmethod
    def from_sources(cls, experiment, config_file=None, overrides=None,
                     output_dir=None, seed=None, svg=False):
        """Merge defaults, config file and overrides (later wins), then validate."""
        if experiment not in EXPERIMENTS:
            raise ConfigError('experiment', "unknown experiment {!r}".format(experiment))
        params = dict(DEFAULTS[experiment])
        raw = {}
        if config_file is not None:
            raw.update(read_config_file(config_file))
        if overrides:
            raw.update(overrides)

        file_seed = raw.pop('seed', None)
        for key, value in raw.items():
            value = _coerce(key, value)
            if key not in DEFAULTS[experiment]:
                raise ConfigError(key, "not a parameter of {}".format(experiment))
            params[key] = value

        if seed is None:
            seed = _coerce('seed', file_seed) if file_seed is not None else 0
        if output_dir is None:
            output_dir = os.path.join(os.getcwd(), experiment)

        config = cls(experiment=experiment, parameters=params,
                     output_dir=output_dir, seed=int(seed), svg=bool(svg))
        config.validate()
        return config

    def validate(self):
        """Check numeric ranges before any computation."""
        p = self.parameters
        for key in FLOAT_KEYS & set(p):
            if not np.isfinite(p[key]):
                raise ConfigError(key, "must be finite")
        for key in FLOAT_LIST_KEYS & set(p):
            if not all(np.isfinite(v) for v in p[key]):
                raise ConfigError(key, "all values must be finite")
        if 'N' in p and p['N'] < 2:
            raise ConfigError('N', "must be >= 2")
        for key in ('g',):
            if key in p and (not np.isfinite(p[key]) or p[key] < 0):
                raise ConfigError(key, "must be finite and >= 0")
        if 'g_values' in p and any(g < 0 or not np.isfinite(g) for g in p['g_values']):
            raise ConfigError('g_values', "all values must be finite and >= 0")
        for key in ('sigma', 'gamma'):
            if key in p and not (np.isfinite(p[key]) and p[key] > 0):
                raise ConfigError(key, "must be finite and > 0")
        if 'sigmas' in p and any(s <= 0 for s in p['sigmas']):
            raise ConfigError('sigmas', "all values must be > 0")
        if 'tau' in p and not p['tau'] > 0:
            raise ConfigError('tau', "must be > 0")
        for key in ('tau_values', 'taus'):
            if key in p and any(not t > 0 for t in p[key]):
                raise ConfigError(key, "all values must be > 0")
        if 'beta' in p and not 0. <= p['beta'] <= 0.5:
            raise ConfigError('beta', "must lie in [0, 1/2]")
        if 'betas' in p and any(not 0. <= b <= 0.5 for b in p['betas']):
            raise ConfigError('betas', "all values must lie in [0, 1/2]")
        for key in ('g_values', 'tau_values', 'n_values', 'r_values', 'betas',
                    'taus', 'sigmas'):
            if key in p and len(p[key]) == 0:
                raise ConfigError(key, "must not be empty")
        if 'n_values' in p:
            if len(p['n_values']) < 3:
                raise ConfigError('n_values', "needs at least 3 sizes")
            if any(n < 2 for n in p['n_values']):
                raise ConfigError('n_values', "all sizes must be >= 2")
        if 'site' in p and 'N' in p and not 1 <= p['site'] <= p['N']:
            raise ConfigError('site', "must lie in 1..N")
        if 'r_values' in p and 'N' in p and \
                any(not 1 <= r <= p['N'] - 1 for r in p['r_values']):
            raise ConfigError('r_values', "all values must lie in 1..N-1")
        for key in ('n_kicks',):
            if key in p and p[key] < 0:
                raise ConfigError(key, "must be >= 0")
        for key in ('sample_size', 'n_iter'):
            if key in p and p[key] < 1:
                raise ConfigError(key, "must be >= 1")
        for key in ('n_line', 'n_random'):
            if key in p and p[key] < 0:
                raise ConfigError(key, "must be >= 0")
        if self.seed < 0:
            raise ConfigError('seed', "must be >= 0")

    def echo(self):
        """Canonical `key=value` lines describing the run."""
        lines = ['experiment={}'.format(self.experiment), 'seed={}'.format(self.seed)]
        for key in sorted(self.parameters):
            value = self.parameters[key]
            if isinstance(value, (list, tuple)):
                value = ','.join(repr(v) for v in value)
            else:
                value = repr(value)
            lines.append('{}={}'.format(key, value))
        return lines

    def config_hash(self):
        """12-hex-digit SHA-256 of the canonical echo."""
        digest = hashlib.sha256('\n'.join(self.echo()).encode('utf-8'))
        return digest.hexdigest()[:12]

    def provenance(self, version):
        """Header fields carried by every emitted file."""
        prov = {'experiment': self.experiment,
                'config_hash': self.config_hash(),
                'seed': self.seed,
                'version': version}
        prov['config'] = '; '.join(self.echo()[2:])
        return prov


"""Result tables
"""

@dataclass
class ResultTable:
    """Rectangular real-valued table plus provenance header.

    Args:
        frame (DataFrame): the data, one column per quantity
        provenance (dict): header fields (experiment, config_hash, seed, version)
        name (str): file stem
    """
    frame: pd.DataFrame
    provenance: dict
    name: str = 'results'

    @property
    def columns(self):
        return list(self.frame.columns)


def emit_csv(table, path):
    """Write a ResultTable as CSV.

    Header lines start with '#'. Reals are written with 17 significant digits
    so that `read_csv` reproduces them bit-exactly. UTF-8, LF line endings.

    Args:
        table (ResultTable): table to write
        path (str): output file

    Returns:
        str: path written
    """
    header = ''.join('# {}: {}\n'.format(k, table.provenance[k])
                     for k in table.provenance)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(header)
        table.frame.to_csv(f, index=False, float_format='%.17g',
                           lineterminator='\n')
    return path


def read_csv(path):
    """Read a CSV written by `emit_csv`.

    Returns:
        tuple: (DataFrame, provenance dict)
    """
    provenance = {}
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].strip().partition(': ')
            provenance[key] = value
    frame = pd.read_csv(path, comment='#', float_precision='round_trip')
    return frame, provenance
