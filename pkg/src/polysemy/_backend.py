"""Kernel selection: the compiled extension when importable, numpy otherwise."""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

active = _ckernels if _ckernels is not None else _pykernels


def name():
    return active.NAME


def set_backend(which):
    """Switch the process-wide kernel backend ("cython" or "python")."""
    global active
    try:
        active = BACKENDS[which]
    except KeyError:
        raise ValueError(f"backend {which!r} unavailable; have {sorted(BACKENDS)}") from None
    return active
