"""Exact arithmetic for even lattices.

Discriminant forms, Nikulin gluing, genus testing and Fourier-Mukai
partner counting, backed by the C++ core.
"""

try:
    from ._latticefm import *  # packaged layout
    from ._latticefm import __doc__ as _core_doc
except ImportError:  # in-tree builds put the module on PYTHONPATH directly
    from _latticefm import *
    from _latticefm import __doc__ as _core_doc
