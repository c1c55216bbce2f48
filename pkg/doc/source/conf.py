# Sphinx configuration of the saitpc documentation.
#
# API pages are generated by sphinx-autoapi from the sources, build with
# `sphinx-build -b html doc/source doc/build`.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

project = 'saitpc'
copyright = '2024, TUM EDA'
author = 'TUM EDA'
release = '0.1.0'

extensions = [
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.intersphinx',
    'autoapi.extension'
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'mako': ('https://docs.makotemplates.org/en/latest/', None)
}

autoapi_type = 'python'
autoapi_dirs = ['../../saitpc']
autoapi_options = [
    'members',
    'undoc-members',
    'show-inheritance',
    'show-module-summary',
    'imported-members'
]
# the report template package holds no API
autoapi_ignore = ['*templates*']

templates_path = ['_templates']
exclude_patterns = []

# class and function signatures without the package path
add_module_names = False

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
