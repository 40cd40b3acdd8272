"""Hot kernels: compiled when the extension is built, pure Python otherwise.

The active implementation is chosen at import time.  :func:`use_backend`
switches it explicitly (tests run both and compare).
"""

from . import _pure

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pure}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pure


def available_backends():
    return sorted(_BACKENDS)


def backend():
    return _active.BACKEND


def use_backend(name):
    """Select ``"python"`` or ``"cython"``; returns the previously active name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}")
    previous = _active.BACKEND
    _active = _BACKENDS[name]
    return previous


def all_pairs_distances(adj):
    return _active.all_pairs_distances(adj)


def embedded_cycles(adj, max_len):
    return _active.embedded_cycles(adj, max_len)


def isometric_cycles(adj, dist, max_len):
    return _active.isometric_cycles(adj, dist, max_len)


def find_isometric_cycle(adj, dist, max_len, skip_len):
    return _active.find_isometric_cycle(adj, dist, max_len, skip_len)
