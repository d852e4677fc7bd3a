"""Wigner distribution and the phase-space form of the admissibility integral.

W_psi(x, xi) = int e^{-2 pi i <xi, y>} psi(x + y/2) conj(psi(x - y/2)) dy,
sampled on the (x, xi) grid inherited from the signal grid.  The half-shifts
are evaluated on a 2x spectrally upsampled copy of psi (zero-padding the
spectrum), so x + y/2 and x - y/2 land exactly on the fine grid with periodic
wrap-around:  fine index of x_j + y_l/2 is (2j + l - N/2) mod 2N.

The group integral int_G W_psi(g^{-1}.(x, xi)) dg, with the phase-space flow
g.(x, xi) = (h x + b, h^{-T} xi + iota(beta)), reduces through the W-marginal
identity to the Calderon function Phi_psi(xi); both sides are computed by
fully independent pipelines and compared in equivalence_check.
"""

from dataclasses import dataclass

import numpy as np

from . import interp
from .grid import GridFunction, dft, idft
from .group import det_restricted, dilation_matrix


@dataclass(frozen=True, eq=False)
class WignerField:
    """Real samples of W_psi on the 2n-dimensional (x, xi) grid."""

    data: np.ndarray  # shape (N,)*2n, real
    L: float
    n: int

    @property
    def N(self):
        return self.data.shape[0]

    def axis_points_x(self):
        return (np.arange(self.N) - self.N // 2) * (self.L / self.N)

    def axis_points_xi(self):
        return (np.arange(self.N) - self.N // 2) / self.L

    def marginal_x(self):
        """sum over xi axes times (1/L)^n; equals |psi(x)|^2."""
        return self.data.sum(axis=tuple(range(self.n, 2 * self.n))) / self.L ** self.n

    def marginal_xi(self):
        """sum over x axes times (L/N)^n; equals |psihat(xi)|^2."""
        return self.data.sum(axis=tuple(range(self.n))) * (self.L / self.N) ** self.n

    def total_mass(self):
        return float(self.data.sum() * (1.0 / self.N) ** self.n)


def _upsample2(psi):
    """Spectrally interpolated samples of psi at half-step resolution (2N)."""
    ph = dft(psi)
    pad = ph.N // 2
    fine_hat = GridFunction(np.pad(ph.data, pad), ph.L, "frequency")
    return idft(fine_hat).data


def wigner(psi, max_bytes=2 ** 31, imag_tol=1e-3):
    """Wigner distribution of a 1-D or 2-D space-domain grid function.

    The discrete field carries a small imaginary residue from the unpaired
    Nyquist node of the y-grid (the half-shift correlation is Hermitian in y
    except at y = -L/2, which has no mirror partner); it shrinks with
    resolution and is checked against imag_tol before being discarded.
    """
    if psi.domain != "space":
        psi = idft(psi)
    n, N = psi.n, psi.N
    if n > 2:
        raise ValueError("Wigner fields are limited to n <= 2")
    if (N ** (2 * n)) * 16 > max_bytes:
        raise MemoryError(f"2n-dimensional Wigner grid would exceed {max_bytes} bytes")
    fine = _upsample2(psi)
    j = np.arange(N)
    l = np.arange(N)
    # fine-grid indices of x_j + y_l/2 and x_j - y_l/2, with periodic wrap
    plus = (2 * j[:, None] + l[None, :] - N // 2) % (2 * N)
    minus = (2 * j[:, None] - l[None, :] + N // 2) % (2 * N)
    if n == 1:
        corr = fine[plus] * np.conj(fine[minus])
        y_axes = (1,)
    else:
        corr = (fine[plus[:, None, :, None], plus[None, :, None, :]]
                * np.conj(fine[minus[:, None, :, None], minus[None, :, None, :]]))
        y_axes = (2, 3)
    dx = psi.L / N
    W = np.fft.fftshift(
        np.fft.fftn(np.fft.ifftshift(corr, axes=y_axes), axes=y_axes),
        axes=y_axes) * dx ** n
    if np.abs(W.imag).max(initial=0.0) > imag_tol * max(np.abs(W.real).max(), 1e-300):
        raise ValueError("Wigner field has a non-negligible imaginary part")
    return WignerField(np.ascontiguousarray(W.real), psi.L, n)


class _WignerSampler:
    """Interpolating access to a WignerField at arbitrary (x, xi) points."""

    def __init__(self, wf, order=3):
        self._data = wf.data.astype(np.complex128)
        self._dx = wf.L / wf.N
        self._dxi = 1.0 / wf.L
        self._half = wf.N // 2
        self._n = wf.n
        self._order = order

    def __call__(self, x_pts, xi_pts):
        idx = np.concatenate([
            np.atleast_2d(x_pts) / self._dx + self._half,
            np.atleast_2d(xi_pts) / self._dxi + self._half,
        ], axis=1)
        return interp.gather(self._data, idx, order=self._order).real


def _trapz_axis(lo, hi, m):
    x = np.linspace(lo, hi, m)
    w = np.full(m, (hi - lo) / (m - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def wigner_admissibility_integral(spec, wf, point, b_halfwidth=10.0, n_b=161,
                                  beta_box=None, n_beta=33, t_box=None, n_t=49,
                                  sampler=None):
    """Quadrature of int_G W(h^{-1}(x - b), h^T(xi - iota(beta))) dg at a
    phase-space point (x, xi), with left Haar weight |det(h^T|V)| / |det h|.
    """
    x0 = np.asarray(point[0], dtype=float).reshape(spec.n)
    xi0 = np.asarray(point[1], dtype=float).reshape(spec.n)
    if sampler is None:
        sampler = _WignerSampler(wf)

    b_ax, b_w = _trapz_axis(-b_halfwidth, b_halfwidth, n_b)
    b_grids = np.meshgrid(*([b_ax] * spec.n), indexing="ij")
    b_pts = np.stack([g.ravel() for g in b_grids], axis=-1)
    bw_grids = np.meshgrid(*([b_w] * spec.n), indexing="ij")
    b_ws = np.prod(np.stack([g.ravel() for g in bw_grids], axis=-1), axis=-1)

    if spec.k:
        bb = np.asarray(beta_box if beta_box is not None
                        else [[-6.0, 6.0]] * spec.k, dtype=float).reshape(spec.k, 2)
        axes = [_trapz_axis(lo, hi, n_beta) for lo, hi in bb]
        bg = np.meshgrid(*[a for a, _ in axes], indexing="ij")
        beta_pts = np.stack([g.ravel() for g in bg], axis=-1)
        wg = np.meshgrid(*[w for _, w in axes], indexing="ij")
        beta_ws = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    else:
        beta_pts = np.zeros((1, 0))
        beta_ws = np.ones(1)

    if spec.d:
        tb = np.asarray(t_box if t_box is not None else spec.params_box,
                        dtype=float).reshape(spec.d, 2)
        axes = [_trapz_axis(lo, hi, n_t) for lo, hi in tb]
        tg = np.meshgrid(*[a for a, _ in axes], indexing="ij")
        t_pts = np.stack([g.ravel() for g in tg], axis=-1)
        wg = np.meshgrid(*[w for _, w in axes], indexing="ij")
        t_ws = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    else:
        t_pts = np.zeros((1, 0))
        t_ws = np.ones(1)

    total = 0.0
    xpos = x0[None, :] - b_pts  # (mb, n)
    for t, wt in zip(t_pts, t_ws):
        h = dilation_matrix(spec, t)
        haar = det_restricted(spec, h) / abs(np.linalg.det(h))
        x_mapped = np.linalg.solve(h, xpos.T).T  # h^{-1}(x - b)
        for beta, wbeta in zip(beta_pts, beta_ws):
            xi_mapped = (xi0 - spec.embed(beta)) @ h  # h^T(xi - beta), one point
            vals = sampler(x_mapped, np.broadcast_to(xi_mapped, x_mapped.shape))
            total += wt * wbeta * haar * float(vals @ b_ws)
    return total


def equivalence_check(spec, psi, test_points, quad, wigner_kwargs=None):
    """Compare the phase-space admissibility integral with the Calderon
    function at the frequency of each test point; two independent pipelines.

    test_points: list of (x, xi) phase-space points.  quad: a
    QuadratureScheme for phi_psi.  Returns a report dict with per-point
    values and the maximum relative deviation.
    """
    from .admissibility import phi_psi_many

    psihat = dft(psi) if psi.domain == "space" else psi
    wf = wigner(psi)
    sampler = _WignerSampler(wf)
    kw = wigner_kwargs or {}
    rows = []
    for x0, xi0 in test_points:
        lhs = wigner_admissibility_integral(spec, wf, (x0, xi0),
                                            sampler=sampler, **kw)
        rhs = float(phi_psi_many(spec, psihat,
                                 np.asarray(xi0, dtype=float).reshape(1, -1),
                                 quad)[0])
        rows.append({"x": list(np.atleast_1d(x0).astype(float)),
                     "xi": list(np.atleast_1d(xi0).astype(float)),
                     "wigner_integral": lhs, "calderon": rhs,
                     "rel_deviation": abs(lhs - rhs) / max(abs(rhs), 1e-300)})
    return {"points": rows,
            "max_rel_deviation": max(r["rel_deviation"] for r in rows)}
