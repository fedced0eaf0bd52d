"""
Driver functions for the magnon-lab experiments.
These functions are meant to be used only with
the `cli.py` command line interface.
"""
import os

import numpy as np
import pandas as pd

import magnonlab
from magnonlab import harper, kicked, classical, rmt, plots, numerics
from magnonlab.onepstate import site_state
from magnonlab.utils import (ResultTable, emit_csv, num_workers,
                             NumericalFailure)

GOE_MEAN = rmt.PREDICTED_MEAN[rmt.EnsembleKind.GOE]
GUE_MEAN = rmt.PREDICTED_MEAN[rmt.EnsembleKind.GUE]


class Run(object):
    """Output bookkeeping for one experiment.

    Args:
        config (ExperimentConfig): validated configuration
        verbose (bool): (optional) print file names and progress
        workers (int): (optional) worker processes, defaults to MAGNON_LAB_THREADS
    """
    def __init__(self, config, verbose=False, workers=None):
        self.config = config
        self.params = config.parameters
        self.verbose = verbose
        self.workers = num_workers(workers)
        self.provenance = config.provenance(magnonlab.__version__)
        self.written = []
        os.makedirs(config.output_dir, exist_ok=True)

    def _path(self, name, ext):
        stem = self.config.experiment if name is None else \
            '{}_{}'.format(self.config.experiment, name)
        return os.path.join(self.config.output_dir, '{}.{}'.format(stem, ext))

    def table(self, frame, name=None):
        """Write one ResultTable to <output_dir>/<experiment>[_name].csv."""
        path = self._path(name, 'csv')
        table = ResultTable(frame=frame.reset_index(drop=True),
                            provenance=self.provenance,
                            name=os.path.basename(path)[:-4])
        emit_csv(table, path)
        self._record(path)
        return table

    def svg(self, series, name=None, **kwargs):
        """Write an SVG plot when the run asked for plots."""
        if not self.config.svg:
            return None
        path = self._path(name, 'svg')
        fig, _ = plots.emit_svg(series, path, **kwargs)
        plots.close(fig)
        self._record(path)
        return path

    def _record(self, path):
        self.written.append(path)
        if self.verbose:
            print("Wrote {}".format(os.path.abspath(path)))


"""Static Harper
"""

def harper_sweep(run):
    """<C> against g at sigma = N gamma and at every fixed sigma in `sigmas`."""
    p = run.params
    n = p['N']
    curves = [('sigma=N*gamma', n * p['gamma'])]
    curves += [('sigma={:g}'.format(s), s) for s in p['sigmas']]

    frames = []
    for label, sigma in curves:
        base = harper.HamiltonianSpec(n, 0., sigma=sigma, beta=p['beta'])
        frame = harper.sweep_g(base, p['g_values'], workers=run.workers,
                               verbose=run.verbose)
        frame.insert(0, 'series', label)
        frame.insert(1, 'sigma', sigma)
        frames.append(frame)
    frame = pd.concat(frames)
    run.table(frame)

    series = {label: (grp['g'].values, grp['avg_C'].values)
              for label, grp in frame.groupby('series', sort=False)}
    run.svg(series, title='N={}'.format(n), xlabel='g', ylabel='<C>')
    return frame


def harper_scaling(run):
    """ln <C> against ln N for each g, and the fitted exponents."""
    p = run.params
    frames, exponents = [], []
    for g in p['g_values']:
        frame = harper.scaling_table(g, p['n_values'], gamma=p['gamma'],
                                     beta=p['beta'], workers=run.workers,
                                     verbose=run.verbose)
        exponents.append(harper.fit_exponent(frame))
        frame.insert(0, 'g', g)
        frames.append(frame)
    frame = pd.concat(frames)
    run.table(frame)
    run.table(pd.DataFrame(dict(g=p['g_values'], exponent=exponents)), name='exponents')

    series = {'g={:g}'.format(g): (grp['N'].values, grp['avg_C'].values)
              for g, grp in frame.groupby('g', sort=False)}
    run.svg(series, loglog=True, xlabel='N', ylabel='<C>')
    return frame


def harper_energy(run):
    """Per-state <C> against scaled energy E/(1+g)."""
    p = run.params
    frames = []
    for g in p['g_values']:
        spec = harper.HamiltonianSpec(p['N'], g, sigma=p['sigma'], beta=p['beta'])
        frame = harper.concurrence_vs_energy(spec, verbose=run.verbose)
        frame.insert(0, 'g', g)
        lo, hi = harper.separatrix_window(g)
        frame['separatrix_low'] = lo / (1. + g)
        frames.append(frame)
    frame = pd.concat(frames)
    run.table(frame)

    series = {'g={:g}'.format(g): (grp['scaled_energy'].values, grp['N_times_avg_C'].values)
              for g, grp in frame.groupby('g', sort=False)}
    run.svg(series, scatter=True, xlabel='E/(1+g)', ylabel='N<C>')
    return frame


"""Kicked Harper
"""

def kicked_tau(run):
    """N<C> of Floquet eigenstates against tau, one curve per beta."""
    p = run.params
    n = p['N']
    frames = []
    for beta in p['betas']:
        spec = kicked.FloquetSpec(n, p['g'], p['tau_values'][0], beta=beta)
        frame = kicked.sweep_tau(spec, p['tau_values'], workers=run.workers,
                                 verbose=run.verbose)
        frame.insert(0, 'series', 'beta={:g}'.format(beta))
        frames.append(frame)
    reference = pd.DataFrame(dict(series=['GOE', 'GUE'], tau=np.nan, beta=np.nan,
                                  avg_C=[GOE_MEAN / n, GUE_MEAN / n],
                                  N_times_avg_C=[GOE_MEAN, GUE_MEAN]))
    frames.append(reference)
    frame = pd.concat(frames)
    run.table(frame)

    curves = frame.dropna(subset=['tau'])
    series = {label: (grp['tau'].values, grp['N_times_avg_C'].values)
              for label, grp in curves.groupby('series', sort=False)}
    run.svg(series, hlines={'4/pi (GOE)': GOE_MEAN, 'pi/2 (GUE)': GUE_MEAN},
            title='N={} g={:g}'.format(n, p['g']), xlabel='tau', ylabel='N<C>')
    return frame


def kicked_time(run):
    """<C>(t) from a site-localized state for each tau, plus post-transient statistics."""
    p = run.params
    n = p['N']
    initial = site_state(n, p['site'])
    frames, stats = [], []
    for tau in p['taus']:
        spec = kicked.FloquetSpec(n, p['g'], tau, beta=p['beta'])
        if run.verbose:
            print("Evolving |{}> for {} kicks at tau={:g}".format(p['site'], p['n_kicks'], tau))
        trace = kicked.evolve(spec, initial, p['n_kicks'], store_states=False)
        frames.append(pd.DataFrame(dict(tau=tau, t=trace.times, avg_C=trace.averages,
                                        N_times_avg_C=n * trace.averages)))
        transient = min(kicked.TRANSIENT_KICKS, p['n_kicks'])
        mean, std = kicked.time_statistics(trace, n, transient=transient)
        first = kicked.first_passage_kick(trace, n, GOE_MEAN)
        stats.append(dict(tau=tau, mean_N_times_avg_C=mean, std_N_times_avg_C=std,
                          first_kick_above_goe=np.nan if first is None else first))
    frame = pd.concat(frames)
    run.table(frame)
    run.table(pd.DataFrame(stats), name='statistics')

    series = {'tau={:g}'.format(tau): (grp['t'].values, grp['N_times_avg_C'].values)
              for tau, grp in frame.groupby('tau', sort=False)}
    run.svg(series, hlines={'pi/2 (GUE)': GUE_MEAN}, xlabel='kicks',
            ylabel='N<C>', title='initial site {}'.format(p['site']))
    return frame


def kicked_neighbor(run):
    """Spectrum-averaged C_r against tau for each neighbor distance r."""
    p = run.params
    n = p['N']
    spec = kicked.FloquetSpec(n, p['g'], p['tau_values'][0], beta=p['beta'])
    grid = kicked.neighbor_profile_sweep(spec, p['r_values'], p['tau_values'],
                                         workers=run.workers, verbose=run.verbose)
    r_idx, tau_idx = np.meshgrid(np.arange(len(p['r_values'])),
                                 np.arange(len(p['tau_values'])), indexing='ij')
    r_values = np.asarray(p['r_values'])[r_idx.ravel()]
    tau_values = np.asarray(p['tau_values'])[tau_idx.ravel()]
    frame = pd.DataFrame(dict(r=r_values, tau=tau_values, C_r=grid.ravel(),
                              N_times_C_r=n * grid.ravel()))
    run.table(frame)

    series = {'r={}'.format(r): (grp['tau'].values, grp['N_times_C_r'].values)
              for r, grp in frame.groupby('r', sort=False)}
    run.svg(series, hlines={'4/pi (GOE)': GOE_MEAN, 'pi/2 (GUE)': GUE_MEAN},
            xlabel='tau', ylabel='N C_r')
    return frame


def kicked_distribution(run):
    """Pooled eigenstate concurrences against both predicted laws, per beta."""
    p = run.params
    n = p['N']
    rows, hists = [], []
    for beta in p['betas']:
        spec = kicked.FloquetSpec(n, p['g'], p['tau'], beta=beta)
        result = kicked.floquet_concurrence(spec, verbose=run.verbose)
        for kind in rmt.EnsembleKind:
            cmp = rmt.compare_ensemble(result.per_state, kind)
            rows.append(dict(beta=beta, law=kind.value, ks=cmp.ks,
                             mean_scaled=cmp.mean_scaled,
                             predicted_mean=cmp.predicted_mean,
                             fraction_above_2=cmp.fraction_above_2))
        centers, density = rmt.concurrence_histogram(rmt.pooled_concurrences(result.per_state))
        hists.append(pd.DataFrame(dict(beta=beta, c=centers, density=density)))
    frame = pd.DataFrame(rows)
    run.table(frame)

    hist = pd.concat(hists)
    centers = hist['c'].values
    hist['pdf_GOE'] = rmt.concurrence_pdf('GOE', centers)
    hist['pdf_GUE'] = rmt.concurrence_pdf('GUE', centers)
    run.table(hist, name='histogram')

    series = {'beta={:g}'.format(b): (grp['c'].values, grp['density'].values)
              for b, grp in hist.groupby('beta', sort=False)}
    grid = np.linspace(0.05, rmt.HIST_UPPER, 120)
    series['GOE law'] = (grid, rmt.concurrence_pdf('GOE', grid))
    series['GUE law'] = (grid, rmt.concurrence_pdf('GUE', grid))
    run.svg(series, xlabel='c = N C', ylabel='density',
            title='N={} tau={:g}'.format(n, p['tau']))
    return frame


"""Classical map
"""

def classical_portrait(run):
    """Phase portraits of the kicked Harper map, one file per tau."""
    p = run.params
    seeds = classical.default_seeds(p['n_line'], p['n_random'], seed=run.config.seed)
    frames = []
    for tau in p['taus']:
        orbits = classical.portrait(tau, p['g'], seeds, p['n_iter'])
        n_orb, n_it, _ = orbits.shape
        frame = pd.DataFrame(dict(orbit=np.repeat(np.arange(n_orb), n_it),
                                  iteration=np.tile(np.arange(n_it), n_orb),
                                  q=orbits[:, :, 0].ravel(), p=orbits[:, :, 1].ravel()))
        frame.insert(0, 'tau', tau)
        name = 'tau{:g}'.format(tau)
        run.table(frame, name=name)
        series = {'_orbit{}'.format(k): (orbits[k, :, 0], orbits[k, :, 1])
                  for k in range(n_orb)}
        run.svg(series, name=name, scatter=True, xlabel='q', ylabel='p',
                title='tau={:g} g={:g}'.format(tau, p['g']), figsize=(5., 5.))
        frames.append(frame)
    return pd.concat(frames)


"""Random-matrix reference values
"""

def rmt_table(run):
    """Predicted and sampled concurrence statistics of both ensembles."""
    p = run.params
    n = p['N']
    seeds = dict(zip(rmt.EnsembleKind, numerics.split_seeds(run.config.seed, 2)))
    rows = []
    for kind in rmt.EnsembleKind:
        if run.verbose:
            print("Sampling {} {} states of N={}".format(p['sample_size'], kind.value, n))
        states = rmt.sample_states(kind, n, p['sample_size'], seeds[kind])
        cmp = rmt.compare_ensemble(states, kind)
        rows.append(dict(kind=kind.value,
                         predicted_mean=rmt.concurrence_mean(kind),
                         fraction_above_2=rmt.fraction_above(kind, 2.),
                         second_moment=rmt.concurrence_moment(kind, 2),
                         finite_n_mean_scaled=n * rmt.finite_n_average(kind, n),
                         sampled_mean_scaled=cmp.mean_scaled,
                         sampled_fraction_above_2=cmp.fraction_above_2,
                         ks=cmp.ks))
    frame = pd.DataFrame(rows)
    run.table(frame)
    return frame


RUNNERS = {
    'harper-sweep': harper_sweep,
    'harper-scaling': harper_scaling,
    'harper-energy': harper_energy,
    'kicked-tau': kicked_tau,
    'kicked-time': kicked_time,
    'kicked-neighbor': kicked_neighbor,
    'kicked-distribution': kicked_distribution,
    'classical-portrait': classical_portrait,
    'rmt-table': rmt_table,
}


def run(config, verbose=False, workers=None):
    """Run one experiment and write its tables (and plots).

    Args:
        config (ExperimentConfig): validated configuration
        verbose (bool): (optional) print progress
        workers (int): (optional) worker processes

    Returns:
        list: paths of the files written
    """
    runner = Run(config, verbose=verbose, workers=workers)
    try:
        RUNNERS[config.experiment](runner)
    except NumericalFailure as err:
        raise type(err)("{}: {}".format(config.experiment, err)) from err
    return runner.written
