# -*- coding: utf-8 -*-
#
# mmnoma documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.intersphinx',
              'sphinx.ext.todo',
              'sphinx.ext.autosummary',
              'sphinx_copybutton'
              ]

autodoc_mock_imports = ['numpy', 'scipy', 'pandas', 'xarray', 'netCDF4',
                        'tqdm']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'mmnoma'
copyright = u'mmnoma developers, 2026'
author = u'mmnoma developers'

version = u'0.3'
release = u'0.3.0'

language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = False

numfig = True


# -- Options for HTML output ----------------------------------------------

import sphinx_rtd_theme
html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_show_sourcelink = False

htmlhelp_basename = 'mmnomadoc'


# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'mmnoma.tex', u'mmnoma Documentation',
     u'mmnoma developers', 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'mmnoma', u'mmnoma Documentation',
     [author], 1)
]
