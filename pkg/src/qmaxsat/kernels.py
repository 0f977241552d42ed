"""Backend selection for the hot loops.

The Cython extension is used when it was built; otherwise the numpy
fallback is loaded. Set ``QMAXSAT_BACKEND=python`` to force the fallback.
"""
import os
from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled


def _default_name() -> str:
    forced = os.environ.get("QMAXSAT_BACKEND", "").strip().lower()
    if forced:
        if forced not in BACKENDS:
            raise ImportError(f"QMAXSAT_BACKEND={forced!r} is not available; have {sorted(BACKENDS)}")
        return forced
    return "cython" if _compiled is not None else "python"


BACKEND = _default_name()
_active = BACKENDS[BACKEND]


def get(name: str | None = None) -> ModuleType:
    """Kernel module by name, or the active one."""
    if name is None:
        return _active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None


def clause_densities(n, vars, neg):
    return _active.clause_densities(n, vars, neg)


def amplify_attempt(*args):
    return _active.amplify_attempt(*args)
