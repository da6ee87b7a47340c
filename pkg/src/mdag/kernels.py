"""Kernel backend selection.

The compiled extension is used when it imports and the graph fits in
64-bit masks; ``MDAG_PURE_PYTHON=1`` forces the pure-Python kernels.
"""

import os

from . import _pykernels as py

try:
    if os.environ.get("MDAG_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as c
except ImportError:
    c = None

BACKEND = "cython" if c is not None else "python"


def _fits(n):
    return c is not None and n <= 64


def is_acyclic(children):
    return (c if _fits(len(children)) else py).is_acyclic(children)


def ancestors_mask(parents, mask):
    return (c if _fits(len(parents)) else py).ancestors_mask(parents, mask)


def closure_through(children, interior):
    return (c if _fits(len(children)) else py).closure_through(children, interior)


def maximal_sets(masks):
    return py.maximal_sets(masks) if c is None else c.maximal_sets(masks)


def project(children, facets, keep):
    return (c if _fits(len(children)) else py).project(children, facets, keep)


def dsep(parents, children, x, y, z):
    return (c if _fits(len(parents)) else py).dsep(parents, children, x, y, z)


def permute_mask(mask, perm):
    return (c if _fits(len(perm)) else py).permute_mask(mask, perm)


def canonical_key(n, children, facets, perms):
    impl = c if (c is not None and n <= 6) else py
    return impl.canonical_key(n, children, facets, perms)
