import numpy as np
import matplotlib
matplotlib.use('Agg')
from matplotlib import pyplot as pl
from matplotlib import rcParams

rcParams['svg.fonttype'] = 'path'
rcParams['svg.hashsalt'] = 'magnonlab'
rcParams['font.size'] = 9

MARKERS = ['o', 's', '^', 'v', 'D', 'x', '+', '*']


def emit_svg(series, path, loglog=False, scatter=False, title='', xlabel='',
             ylabel='', hlines=None, figsize=(6.5, 4.5)):
    """Write a line or scatter plot as a standalone SVG document.

    Args:
        series (dict): label -> (x, y) arrays. Labels starting with '_' are
            left out of the legend.
        path (str): output file
        loglog (bool): (optional) logarithmic x and y axes
        scatter (bool): (optional) draw points instead of polylines
        title (string): (optional) plot title
        xlabel (string): (optional) x-axis label
        ylabel (string): (optional) y-axis label
        hlines (dict): (optional) label -> y of horizontal reference lines
        figsize (tuple): (optional) figure size in inches

    Returns:
        tuple: (figure, axes), still open; callers may inspect the data
            transform before closing
    """
    fig = pl.figure(figsize=figsize)
    ax = fig.add_subplot(111)

    for i, (label, (x, y)) in enumerate(series.items()):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if scatter:
            ax.plot(x, y, ',' if x.size > 2000 else '.', ms=1.5, label=label)
        elif x.size == 1:
            ax.plot(x, y, MARKERS[i % len(MARKERS)], label=label)
        else:
            ax.plot(x, y, '-', marker=MARKERS[i % len(MARKERS)], ms=3, lw=1.2, label=label)

    if hlines:
        for label, level in hlines.items():
            ax.axhline(level, color='0.4', ls='--', lw=1., label=label)

    if loglog:
        ax.set_xscale('log')
        ax.set_yscale('log')
    else:
        _cover_extrema(ax, series, hlines)

    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    _, labels = ax.get_legend_handles_labels()
    if labels:
        ax.legend(loc='best', fontsize='small', markerscale=3 if scatter else 1)

    fig.tight_layout()
    fig.savefig(path, format='svg', metadata={'Date': None})
    return fig, ax


def _cover_extrema(ax, series, hlines):
    xs = [np.ravel(np.asarray(x, dtype=float)) for x, _ in series.values()]
    ys = [np.ravel(np.asarray(y, dtype=float)) for _, y in series.values()]
    if hlines:
        ys.append(np.asarray(list(hlines.values()), dtype=float))
    xs = np.concatenate(xs) if xs else np.zeros(0)
    ys = np.concatenate(ys) if ys else np.zeros(0)
    xs, ys = xs[np.isfinite(xs)], ys[np.isfinite(ys)]
    for values, setter in ((xs, ax.set_xlim), (ys, ax.set_ylim)):
        if values.size == 0:
            continue
        lo, hi = values.min(), values.max()
        pad = 0.05 * (hi - lo) if hi > lo else max(abs(lo), 1.) * 0.05
        setter(lo - pad, hi + pad)


def close(fig):
    pl.close(fig)
