"""Generalized wavelet transform over a sampled group grid.

The coefficient field C(x, xi, t) = <f, pi(1, x, xi, t) psi> is computed for
all x at once per (xi, t) node: on the frequency side the inner product is
the integral of f_hat(gamma) |det h|^{1/2} conj(psihat(h^T(gamma - xi)))
e^{2 pi i <gamma, x>}, i.e. an inverse DFT of a pointwise product.  The phase
coordinate z is integrated out analytically (the circle has Haar mass one and
only contributes |z| = 1 factors to every squared quantity).

The x-integral of any squared coefficient slab is exact at grid level
(discrete Parseval), so the transform-side norm identity

    ||V_psi f||^2 = int |f_hat(omega)|^2 Phi_psi(omega) d omega

holds with all quadrature error confined to the (xi, t) sums.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridFunction, SpectrumSampler, dft, idft
from .group import det_restricted, dilation_matrix


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """V_psi f sampled on (xi-node, t-node, x-grid); z integrated out.

    values: complex64, shape (m_xi, m_t, N, ..., N).  haar_t holds the left
    Haar density |det(h^T|V)| / |det h| at each t node, so the squared norm is
    sum |C|^2 dx^n * w_xi * w_t * haar_t.
    """

    values: np.ndarray
    xi_nodes: np.ndarray  # (m_xi, k)
    xi_weights: np.ndarray  # (m_xi,)
    t_nodes: np.ndarray  # (m_t, d)
    t_weights: np.ndarray  # (m_t,)
    haar_t: np.ndarray  # (m_t,)
    L: float
    n: int

    @property
    def N(self):
        return self.values.shape[2]

    def node_weight(self):
        """Haar weight per (xi, t) node pair, shape (m_xi, m_t)."""
        return np.outer(self.xi_weights, self.t_weights * self.haar_t)

    def save(self, path):
        path = Path(path)
        self.values.astype("<c8").ravel().tofile(path)
        sidecar = {
            "shape": list(self.values.shape),
            "xi_nodes": self.xi_nodes.tolist(),
            "xi_weights": self.xi_weights.tolist(),
            "t_nodes": self.t_nodes.tolist(),
            "t_weights": self.t_weights.tolist(),
            "haar_t": self.haar_t.tolist(),
            "L": self.L,
            "n": self.n,
        }
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar))

    @staticmethod
    def load(path):
        path = Path(path)
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        values = np.fromfile(path, dtype="<c8").reshape(meta["shape"])
        return CoefficientField(
            values=values,
            xi_nodes=np.array(meta["xi_nodes"], dtype=float),
            xi_weights=np.array(meta["xi_weights"], dtype=float),
            t_nodes=np.array(meta["t_nodes"], dtype=float),
            t_weights=np.array(meta["t_weights"], dtype=float),
            haar_t=np.array(meta["haar_t"], dtype=float),
            L=meta["L"],
            n=meta["n"],
        )


def group_grid(spec, xi_box, t_box, n_xi=32, n_t=48):
    """Trapezoid tensor nodes over the (xi, t) group directions.

    Trapezoid (not Gauss-Legendre) because the transform integrands are
    smooth, localized, and effectively periodic in xi, where the trapezoid
    rule converges spectrally and keeps the node set reusable as a plain grid.
    """
    from .admissibility import _tensor_nodes

    xi_box = [list(map(float, b)) for b in np.asarray(xi_box, float).reshape(spec.k, 2)]
    t_box = [list(map(float, b)) for b in np.asarray(t_box, float).reshape(spec.d, 2)]
    xin, xiw = _tensor_nodes(xi_box, [n_xi] * spec.k, "trapezoid")
    tn, tw = _tensor_nodes(t_box, [n_t] * spec.d, "trapezoid")
    return xin, xiw, tn, tw


def _ensure_freq(f):
    return f if f.domain == "frequency" else dft(f)


def analyze(spec, f, psi, grid_nodes, sampler=None):
    """Wavelet coefficients of f against psi on the given group grid.

    grid_nodes: (xi_nodes, xi_weights, t_nodes, t_weights) as from group_grid.
    f, psi: GridFunctions on the same box (either domain; transformed as
    needed).  Returns a CoefficientField.
    """
    xin, xiw, tn, tw = grid_nodes
    fhat = _ensure_freq(f)
    psihat = _ensure_freq(psi)
    if fhat.data.shape != psihat.data.shape or fhat.L != psihat.L:
        raise ValueError("signal and wavelet must share one grid")
    if sampler is None:
        sampler = SpectrumSampler(psihat)
    n = fhat.n
    shape = fhat.data.shape
    grids = fhat.meshgrid()
    gam = np.stack([g.ravel() for g in grids], axis=-1)

    values = np.empty((len(xin), len(tn)) + shape, dtype=np.complex64)
    haar_t = np.empty(len(tn))
    inv_cell = (fhat.L / fhat.N) ** n  # idft scaling
    for it, t in enumerate(tn):
        h = dilation_matrix(spec, t)
        det = abs(np.linalg.det(h))
        haar_t[it] = det_restricted(spec, h) / det
        gam_h = gam @ h
        for ix, xi in enumerate(xin):
            pts = gam_h - (spec.embed(xi) @ h)[None, :]
            wv = np.conj(sampler(pts)).reshape(shape)
            G = fhat.data * (det ** 0.5) * wv
            slab = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(G))) / inv_cell
            values[ix, it] = slab.astype(np.complex64)
    return CoefficientField(values=values, xi_nodes=np.atleast_2d(xin),
                            xi_weights=xiw, t_nodes=np.atleast_2d(tn),
                            t_weights=tw, haar_t=haar_t, L=fhat.L, n=n)


def single_coefficient(spec, f, psi, x, xi, t):
    """<f, pi((1, x, xi, t)) psi> by direct grid inner product — the slow
    reference path used to cross-check analyze.

    apply_pi snaps x to a grid node and xi to a frequency node, so for an
    exact comparison against a CoefficientField entry, x must lie on the
    signal grid and xi on a frequency node (pick a group grid whose xi
    spacing is a multiple of 1/L)."""
    from .grid import apply_pi

    fs = f if f.domain == "space" else idft(f)
    ps = psi if psi.domain == "space" else idft(psi)
    g = spec.element(1.0, x, xi, t)
    moved = apply_pi(spec, g, ps)
    return complex(np.sum(fs.data * np.conj(moved.data)) * fs.cell())


def coefficient_norm_sq(field):
    """Haar-weighted squared norm of the coefficient field."""
    dx_n = (field.L / field.N) ** field.n
    per_node = np.sum(np.abs(field.values.astype(np.complex128)) ** 2,
                      axis=tuple(range(2, field.values.ndim))) * dx_n
    return float(np.sum(per_node * field.node_weight()))


def field_inner_product(field_a, field_b):
    """Haar-weighted inner product of two coefficient fields on one grid."""
    if field_a.values.shape != field_b.values.shape:
        raise ValueError("fields must share the group grid")
    dx_n = (field_a.L / field_a.N) ** field_a.n
    prod = field_a.values.astype(np.complex128) * np.conj(
        field_b.values.astype(np.complex128))
    per_node = np.sum(prod, axis=tuple(range(2, prod.ndim))) * dx_n
    return complex(np.sum(per_node * field_a.node_weight()))


def synthesize(spec, field, psi, C=1.0, sampler=None):
    """Inversion: f_rec = (1/C) sum over nodes of C(x, xi, t) pi(x, xi, t) psi.

    Evaluated on the frequency side: each (xi, t) node contributes
    |det h|^{1/2} psihat(h^T(gamma - xi)) times the DFT of its x-slab, summed
    with Haar weights.  Returns a space-domain GridFunction.
    """
    psihat = _ensure_freq(psi)
    if sampler is None:
        sampler = SpectrumSampler(psihat)
    n = field.n
    shape = psihat.data.shape
    grids = psihat.meshgrid()
    gam = np.stack([g.ravel() for g in grids], axis=-1)
    acc = np.zeros(shape, dtype=np.complex128)
    cell = (field.L / field.N) ** n  # dft scaling for the x-integral
    for it, t in enumerate(field.t_nodes):
        h = dilation_matrix(spec, t)
        det = abs(np.linalg.det(h))
        gam_h = gam @ h
        w_t = field.t_weights[it] * field.haar_t[it]
        for ix, xi in enumerate(field.xi_nodes):
            pts = gam_h - (spec.embed(xi) @ h)[None, :]
            wv = sampler(pts).reshape(shape)
            slab = field.values[ix, it].astype(np.complex128)
            chat = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(slab))) * cell
            acc += (field.xi_weights[ix] * w_t * det ** 0.5) * wv * chat
    fhat_rec = GridFunction(acc / C, field.L, "frequency")
    return idft(fhat_rec)
