#!/usr/bin/env python3
#
# qlbdirac documentation build configuration file
import os
import sys

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))

import qlbdirac  # noqa

extensions = [
    'sphinx.ext.viewcode',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'qlbdirac'
copyright = '2026, qlbdirac developers'
author = 'qlbdirac developers'

version = '.'.join(qlbdirac.__version__.split('.', 2)[:2])
release = qlbdirac.__version__

language = None
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = []
htmlhelp_basename = 'qlbdiracdoc'

latex_elements = {
}
latex_documents = [
    (master_doc, 'qlbdirac.tex', 'qlbdirac Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'qlbdirac', 'qlbdirac Documentation', [author], 1)
]
