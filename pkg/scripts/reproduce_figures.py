#!/usr/bin/env python
# Run every experiment with its default settings and write tables and plots
# under one directory: reproduce_figures.py [outdir] [extra magnon-lab args]

import os
import sys
from glob import glob

from magnonlab import cli
from magnonlab.utils import EXPERIMENTS

outdir = sys.argv[1] if len(sys.argv) > 1 else 'figures'
args = sys.argv[2:]

failed = []
for experiment in EXPERIMENTS:
    target = os.path.abspath(os.path.join(outdir, experiment))
    if glob(os.path.join(target, experiment + "*.csv")):
        print("skipping {}, already in {}".format(experiment, target))
        continue
    print("magnon-lab {} --out {} --svg {}".format(experiment, target, ' '.join(args)))
    code = cli.main([experiment, '--out', target, '--svg'] + args)
    if code != 0:
        failed.append(experiment)

if failed:
    print("failed: {}".format(', '.join(failed)))
    sys.exit(1)
