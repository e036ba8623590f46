"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin
is the fallback.  ``TWORUIN_BACKEND=python|cython`` forces a choice at
import time, and every simulation entry point also accepts ``backend=``.
Both backends produce bit-identical results.
"""

import os

from . import _pykernels
from .errors import ConfigError

try:
    from . import _speedups
except ImportError:  # extension not built; reference kernels take over
    _speedups = None

_BY_NAME = {"python": _pykernels}
if _speedups is not None:
    _BY_NAME["cython"] = _speedups


def available_backends():
    """Names of usable backends, fastest first."""
    return (["cython"] if _speedups is not None else []) + ["python"]


def get_backend(name=None):
    """Resolve a backend module from a name, the environment, or the default."""
    if name is None:
        name = os.environ.get("TWORUIN_BACKEND") or available_backends()[0]
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ConfigError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None


DEFAULT = get_backend()
