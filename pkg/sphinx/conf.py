# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# For a full list of options see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import magnonlab

# -- Project information -----------------------------------------------------

project = 'magnonlab'
copyright = '2024, the magnonlab developers'
author = 'the magnonlab developers'

# The short X.Y version
version = '.'.join(magnonlab.__version__.split('.')[:-1])
# The full version, including alpha/beta/rc tags.
release = magnonlab.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
]

templates_path = []
source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = None

# worker pools are never started while building the API pages
autodoc_mock_imports = ['pathos']


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'magnonlabdoc'


# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'magnonlab.tex', 'magnonlab Documentation',
     author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'magnon-lab', 'magnonlab Documentation',
     [author], 1)
]


# -- Options for Texinfo output ----------------------------------------------

texinfo_documents = [
    (master_doc, 'magnonlab', 'magnonlab Documentation',
     author, 'magnonlab', 'Pairwise concurrence of one-particle states',
     'Miscellaneous'),
]


# -- Options for Epub output -------------------------------------------------

epub_title = project
epub_exclude_files = ['search.html']
