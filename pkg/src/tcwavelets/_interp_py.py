"""Pure-numpy fallback for the grid gather kernel.

Same contract as the compiled version in ``_interp_cy``: separable linear or
cubic (4-point Lagrange) interpolation on a uniform index grid, with values
outside the grid treated as zero.
"""

from itertools import product

import numpy as np


_NODES = {1: np.array([0, 1]), 3: np.array([-1, 0, 1, 2]),
          5: np.array([-2, -1, 0, 1, 2, 3])}


def _axis_weights(frac, order):
    """Return (offsets, weights) for one axis; weights has shape (ntap, m)."""
    nodes = _NODES[order]
    s = np.asarray(frac)
    w = []
    for ni in nodes:
        num = np.ones_like(s)
        den = 1.0
        for nj in nodes:
            if nj != ni:
                num = num * (s - nj)
                den *= ni - nj
        w.append(num / den)
    return nodes, np.stack(w)


def gather(values, pts, order):
    """Sample `values` (complex ndarray) at fractional index coords `pts` (m, ndim)."""
    values = np.asarray(values, dtype=np.complex128)
    pts = np.asarray(pts, dtype=np.float64)
    ndim = values.ndim
    m = pts.shape[0]
    base = np.floor(pts).astype(np.intp)
    frac = pts - base

    offsets = []
    weights = []
    for ax in range(ndim):
        off, w = _axis_weights(frac[:, ax], order)
        offsets.append(off)
        weights.append(w)

    flat = values.ravel()
    strides = np.array(values.strides) // values.itemsize
    shape = values.shape
    out = np.zeros(m, dtype=np.complex128)
    for taps in product(*(range(len(o)) for o in offsets)):
        w = np.ones(m)
        idx = np.zeros(m, dtype=np.intp)
        ok = np.ones(m, dtype=bool)
        for ax, tap in enumerate(taps):
            j = base[:, ax] + offsets[ax][tap]
            ok &= (j >= 0) & (j < shape[ax])
            idx += np.clip(j, 0, shape[ax] - 1) * strides[ax]
            w *= weights[ax][tap]
        out += np.where(ok, w, 0.0) * flat[idx]
    return out
