"""Hot-loop kernels with automatic backend selection.

The compiled Cython extensions are preferred when built; otherwise the
numpy fallbacks are used. Both expose the same two entry points
(``sgns_train``, ``pacmap_optimize``) and are each deterministic for a
fixed seed, but they are not numerically identical to one another (the
fallback batches updates per sentence and sums in vector order). Set
``CHRONOBLOX_KERNELS=numpy|cython`` to force a backend at import time.
"""

from __future__ import annotations

import importlib
import os
from types import SimpleNamespace

from .. import errors

_COMPILED = ("chronoblox.kernels._sgns", "chronoblox.kernels._pacmap")
_FALLBACK = ("chronoblox.kernels._sgns_np", "chronoblox.kernels._pacmap_np")


def _try_load(names: tuple[str, str]) -> SimpleNamespace | None:
    try:
        sgns_mod = importlib.import_module(names[0])
        pacmap_mod = importlib.import_module(names[1])
    except ImportError:
        return None
    return SimpleNamespace(sgns_train=sgns_mod.sgns_train,
                           pacmap_optimize=pacmap_mod.pacmap_optimize)


def available_backends() -> list[str]:
    """Backends importable in this environment, preferred first."""
    out = []
    if _try_load(_COMPILED) is not None:
        out.append("cython")
    out.append("numpy")
    return out


def get_backend(name: str) -> SimpleNamespace:
    """Load one backend by name; used by tests and the benchmark."""
    if name == "cython":
        ns = _try_load(_COMPILED)
        if ns is None:
            raise errors.ChronobloxError("compiled kernels are not built")
        return ns
    if name == "numpy":
        ns = _try_load(_FALLBACK)
        assert ns is not None
        return ns
    raise ValueError(f"unknown kernel backend {name!r}")


_requested = os.environ.get("CHRONOBLOX_KERNELS")
if _requested:
    BACKEND = _requested
    _active = get_backend(_requested)
else:
    BACKEND = available_backends()[0]
    _active = get_backend(BACKEND)

sgns_train = _active.sgns_train
pacmap_optimize = _active.pacmap_optimize
