"""Backend dispatch for the numeric kernels.

The compiled extension is preferred when it imported cleanly; set the
environment variable STALLINGS_PURE to any value to force the pure
Python backend (STALLINGS_NO_EXT skips building the extension in the
first place).  Both backends implement identical semantics; exact
integer results are bit-identical, float results agree to tolerance.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_compiled = None
if not os.environ.get("STALLINGS_PURE"):
    try:
        from . import _speedups as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

__all__ = [
    "backend_name",
    "edge_state_arrays",
    "closed_walk_counts",
    "nb_spectral_radius",
]


def backend_name() -> str:
    return "compiled" if _impl is not _kernels_py else "pure"


def edge_state_arrays(graph, edges=None):
    """Directed-edge-state arrays (tails, heads, rev, n_vertices).

    Each positive edge contributes two states, the reverse pairing is
    index xor 1.  ``edges`` may restrict to a subgraph (for example a
    2-core); vertex ids stay those of the original graph.
    """
    if edges is None:
        edges = graph.edges()
    tails = []
    heads = []
    for u, _lab, v in edges:
        tails.append(u)
        heads.append(v)
        tails.append(v)
        heads.append(u)
    n = len(tails)
    rev = np.arange(n, dtype=np.int64) ^ 1
    return (
        np.asarray(tails, dtype=np.int64),
        np.asarray(heads, dtype=np.int64),
        rev,
        graph.vertex_count,
    )


def closed_walk_counts(tails, heads, rev, n_vertices, root, r_max):
    return _impl.closed_walk_counts(tails, heads, rev, n_vertices, root, r_max)


def nb_spectral_radius(tails, heads, rev, n_vertices, tol, max_iter):
    return _impl.nb_spectral_radius(tails, heads, rev, n_vertices, tol, max_iter)
