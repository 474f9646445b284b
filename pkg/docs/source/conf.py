# -*- coding: utf-8 -*-

# Allow the docs to be built without installing numpy and scipy (which are
# expensive to install). This is achieved by swapping out missing modules for
# mocks.
import sys
from mock import Mock as MagicMock

class Mock(MagicMock):
    @classmethod
    def __getattr__(cls, name):
            return Mock()

MOCK_MODULES = ['numpy', 'scipy', 'scipy.integrate', 'scipy.linalg']
for mod_name in MOCK_MODULES:
    try:
        __import__(mod_name)
    except ImportError:
        sys.modules.update({mod_name: Mock()})

AUTHORS = u'The oirl Authors'


#
# oirl documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys  # noqa
import os   # noqa

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('../..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.doctest',
    'sphinx.ext.mathjax',
    'numpydoc',
]

# Don't generate a table of every member of every class
numpydoc_show_class_members = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'oirl'
copyright = u'2026, the oirl Authors'

# Document members in the order they appear in the source
autodoc_member_order = "bysource"

# The version info for the project, acts as replacement for |version| and
# |release|, also used in various other places throughout the built documents.
from oirl import __version__ as version
release = version

exclude_patterns = []
pygments_style = 'sphinx'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}

# -- Options for HTML output ----------------------------------------------

html_theme = 'nature'
html_static_path = []
htmlhelp_basename = 'oirldoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    ('index', 'oirl.tex', u'oirl Documentation',
     AUTHORS, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'oirl', u'oirl Documentation',
     [AUTHORS], 1)
]
