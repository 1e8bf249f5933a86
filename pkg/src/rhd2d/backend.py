"""Kernel backend selection.

The hot kernels exist twice: a compiled Cython extension (`rhd2d._kernels`)
and a pure-numpy fallback (`rhd2d._kernels_np`).  The compiled lane is used
when importable; `RHD2D_BACKEND=numpy|cython` forces a lane explicitly.
"""

import os

from . import _kernels_np

_FORCED = os.environ.get("RHD2D_BACKEND", "auto").lower()

if _FORCED not in ("auto", "numpy", "cython"):
    raise ValueError(f"RHD2D_BACKEND must be auto|numpy|cython, got {_FORCED!r}")

_impl = _kernels_np
if _FORCED in ("auto", "cython"):
    try:
        from . import _kernels as _compiled
        _impl = _compiled
    except ImportError:
        if _FORCED == "cython":
            raise ImportError(
                "RHD2D_BACKEND=cython requested but rhd2d._kernels is not built; "
                "run `pip install -e . --no-build-isolation`"
            )

BACKEND_NAME = _impl.BACKEND_NAME

recover_primitive = _impl.recover_primitive
weno5_multi = _impl.weno5_multi
pair_speeds = _impl.pair_speeds
hll1d_flux = _impl.hll1d_flux
corner_fluxes = _impl.corner_fluxes


def get_backend(name):
    """Return the kernel module for `name` ('numpy' or 'cython')."""
    if name == "numpy":
        return _kernels_np
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
