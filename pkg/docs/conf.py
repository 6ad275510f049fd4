# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

import os
import sys
sys.path.insert(0, os.path.abspath('../'))

from gamma_ppc import __short_version__, __release__, __description__

# -- Project information -----------------------------------------------------

project = 'gamma-ppc'
copyright = '2026, the gamma-ppc authors'
author = 'the gamma-ppc authors'

version = __short_version__
release = __release__

add_module_names = True

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx_autodoc_typehints',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = []
pygments_style = 'sphinx'

rst_epilog = """
|epi_pre| |release|\\ |epi_post|

.. |epi_pre| raw:: html

   <sub>Generated from version

.. |epi_post| raw:: html

   </sub>
"""

# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_theme_options = {
    'description': __description__,
    'fixed_sidebar': True,
    'sidebar_collapse': False,
    'extra_nav_links': {
        'Index': 'genindex.html'
    }
}
html_static_path = ['_static']
html_sidebars = {
    '**': [
        'about.html',
        'navigation.html',
        'searchbox.html'
    ]
}
htmlhelp_basename = 'GammaPpcDoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'jsonschema': ('https://python-jsonschema.readthedocs.io/en/stable/', None),
    'marshmallow': ('https://marshmallow.readthedocs.io/en/stable/', None),
}
