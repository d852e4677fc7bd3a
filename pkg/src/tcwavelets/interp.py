"""Grid interpolation front end: compiled kernel when available, numpy otherwise.

The single hot loop of the whole library is "sample a gridded spectrum at many
arbitrary points"; everything else is FFTs and small linear algebra.  The
kernel is selected once at import time; ``BACKEND`` records the choice.
"""

import numpy as np

try:
    from . import _interp_cy as _kernel

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _interp_py as _kernel

    BACKEND = "python"

from . import _interp_py


def gather(values, pts, order=3, backend=None):
    """Interpolate `values` at fractional index coordinates `pts` (m, ndim).

    order 1 is multilinear; orders 3 and 5 are separable 4- and 6-point
    Lagrange stencils.
    Points outside the grid (or stencil taps falling outside) contribute zero,
    which implements the "clamp to zero outside the band" convention for
    spectra sampled off their grid.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if pts.shape[1] != np.ndim(values):
        raise ValueError(
            f"points have dimension {pts.shape[1]}, grid has {np.ndim(values)}"
        )
    if order not in (1, 3, 5):
        raise ValueError("order must be 1, 3, or 5")
    if np.ndim(values) > 4:
        raise ValueError("gather supports at most 4 axes")
    mod = _interp_py if backend == "python" else _kernel
    return mod.gather(np.ascontiguousarray(values, dtype=np.complex128), pts, order)
