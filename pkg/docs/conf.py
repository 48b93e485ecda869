# -*- coding: utf-8 -*-
#
# Sphinx configuration for motif-agm.  Build with `python setup.py docs`;
# the API pages under docs/api are generated by sphinx-apidoc.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# ReadTheDocs does not run sphinx-apidoc itself
if os.environ.get('READTHEDOCS', None) == 'True':
    from sphinx.ext import apidoc

    here = os.path.dirname(os.path.abspath(__file__))
    apidoc.main(['-f', '-o', os.path.join(here, 'api'),
                 os.path.join(here, '..', 'motif_agm')])

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx',
              'sphinx.ext.autosummary', 'sphinx.ext.viewcode',
              'sphinx.ext.napoleon']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'motif-agm'
copyright = u'motif-agm contributors'

version = ''  # Is set by calling `setup.py docs`
release = ''  # Is set by calling `setup.py docs`
try:
    from motif_agm import __version__ as version
except ImportError:
    pass
else:
    release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'motif_agm-doc'

python_version = '.'.join(map(str, sys.version_info[0:2]))
intersphinx_mapping = {
    'python': ('https://docs.python.org/' + python_version, None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'sklearn': ('https://scikit-learn.org/stable', None),
}
