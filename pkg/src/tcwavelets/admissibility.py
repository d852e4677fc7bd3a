"""Calderon-type admissibility machinery: the auxiliary function Phi_psi,
admissibility verdicts, admissible-vector construction, and the orbit weight
Psi whose weighted L^2 finiteness characterizes the discrete-series case.

Phi_psi(omega) = integral over (xi, t) of |psihat(h(t)^T (omega - iota(xi)))|^2
|det(h^T|V)|, against Lebesgue d(xi) dt.  The quadrature applies the exact
affine substitution u = [h(t)^T (omega - iota(xi))]_{1..k} at fixed t: its
Jacobian cancels |det(h^T|V)| exactly, leaving

    Phi(omega) = int dt int du |psihat(u, tail_t(omega))|^2,

where tail_t(omega) is the last n-k components of h(t)^T omega.  The u-domain
is the wavelet band, a fixed box independent of t, which is what makes a
tensor quadrature converge uniformly over the t-box.  The raw (xi, t) tensor
rule is kept as `phi_psi_raw` for oracle cross-checks at parameters where the
xi-scale is t-independent.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .grid import GridFunction, SpectrumSampler
from .group import det_restricted, dilation_matrix


def _tensor_nodes(boxes, counts, kind):
    """Tensor-product nodes/weights over a list of [lo, hi] boxes."""
    axes, waxes = [], []
    for (lo, hi), m in zip(boxes, counts):
        if kind == "gauss-legendre":
            x, w = leggauss(m)
            axes.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            waxes.append(0.5 * (hi - lo) * w)
        elif kind == "trapezoid":
            x = np.linspace(lo, hi, m)
            w = np.full(m, (hi - lo) / (m - 1))
            w[0] *= 0.5
            w[-1] *= 0.5
            axes.append(x)
            waxes.append(w)
        else:
            raise ValueError("kind must be 'gauss-legendre' or 'trapezoid'")
    if not axes:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*waxes, indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureScheme:
    """Tensor quadrature for the admissibility integrals.

    u_nodes/u_weights discretize the band variable (k dims, the image of the
    xi-integral under the exact affine substitution); t_nodes/t_weights the
    dilation parameters (d dims).
    """

    u_nodes: np.ndarray  # (mu, k)
    u_weights: np.ndarray  # (mu,)
    t_nodes: np.ndarray  # (mt, d)
    t_weights: np.ndarray  # (mt,)
    kind: str = "gauss-legendre"
    u_box: tuple = ()
    t_box: tuple = ()

    def __post_init__(self):
        if (self.u_weights < 0).any() or (self.t_weights < 0).any():
            raise ValueError("quadrature weights must be positive")

    @staticmethod
    def build(u_box, t_box, n_u=32, n_t=48, kind="gauss-legendre"):
        """u_box: list of k [lo,hi] pairs; t_box: list of d [lo,hi] pairs."""
        u_box = [list(map(float, b)) for b in u_box]
        t_box = [list(map(float, b)) for b in t_box]
        un, uw = _tensor_nodes(u_box, [n_u] * len(u_box), kind)
        tn, tw = _tensor_nodes(t_box, [n_t] * len(t_box), kind)
        return QuadratureScheme(un, uw, tn, tw, kind,
                                tuple(map(tuple, u_box)), tuple(map(tuple, t_box)))


def default_quadrature(spec, band_center=None, band_halfwidth=4.0,
                       t_box=None, n_u=32, n_t=48):
    """Quadrature sized to a wavelet band around `band_center` (k-vector)."""
    c = np.zeros(spec.k) if band_center is None else np.asarray(band_center, float)
    u_box = [[c[i] - band_halfwidth, c[i] + band_halfwidth] for i in range(spec.k)]
    tb = spec.params_box if t_box is None else np.asarray(t_box, float).reshape(spec.d, 2)
    return QuadratureScheme.build(u_box, list(tb), n_u=n_u, n_t=n_t)


def _tails(spec, omegas, quad):
    """tail_t(omega): last n-k components of h(t)^T omega, shape (mt, m, n-k)."""
    omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
    out = np.empty((len(quad.t_nodes), len(omegas), spec.n - spec.k))
    for it, t in enumerate(quad.t_nodes):
        h = dilation_matrix(spec, t)
        out[it] = (omegas @ h)[:, spec.k:]
    return out


def _as_sampler(psihat):
    if isinstance(psihat, SpectrumSampler):
        return psihat
    if isinstance(psihat, GridFunction):
        return SpectrumSampler(psihat)
    return SpectrumSampler(psihat)  # callable


def phi_psi_many(spec, psihat, omegas, quad, sampler=None):
    """Phi_psi at a batch of frequencies; see module docstring for the rule."""
    sampler = _as_sampler(psihat) if sampler is None else sampler
    omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
    m = len(omegas)
    tails = _tails(spec, omegas, quad)
    mu = len(quad.u_nodes)
    acc = np.zeros(m)
    for it in range(len(quad.t_nodes)):
        # points (u, tail) for all omegas at once: (m * mu, n)
        pts = np.empty((m, mu, spec.n))
        pts[:, :, : spec.k] = quad.u_nodes[None, :, :]
        pts[:, :, spec.k:] = tails[it][:, None, :]
        vals = sampler(pts.reshape(-1, spec.n))
        integ = np.abs(vals.reshape(m, mu)) ** 2
        acc += quad.t_weights[it] * (integ @ quad.u_weights)
    return acc


def phi_psi(spec, psihat, omega, quad, sampler=None):
    """The auxiliary Calderon function at a single frequency."""
    return float(phi_psi_many(spec, psihat, omega, quad, sampler=sampler)[0])


def phi_psi_raw(spec, psihat, omega, xi_box, t_box, n_xi=200, n_t=200):
    """Independent oracle: brute-force tensor quadrature in the original
    (xi, t) variables with the |det(h^T|V)| weight.  Converges only where the
    xi-scale of the integrand is uniform over the t-box; used in tests."""
    sampler = _as_sampler(psihat)
    omega = np.asarray(omega, dtype=float).reshape(spec.n)
    xin, xiw = _tensor_nodes([list(map(float, b)) for b in xi_box],
                             [n_xi] * spec.k, "trapezoid")
    tn, tw = _tensor_nodes([list(map(float, b)) for b in t_box],
                           [n_t] * spec.d, "trapezoid")
    total = 0.0
    for t, wt in zip(tn, tw):
        h = dilation_matrix(spec, t)
        det_v = det_restricted(spec, h)
        shifted = omega[None, :] - np.pad(xin, ((0, 0), (0, spec.n - spec.k)))
        vals = sampler(shifted @ h)
        total += wt * det_v * float(np.abs(vals) ** 2 @ xiw)
    return total


def boundary_mass_fraction(spec, psihat, omegas, quad):
    """Integrand mass carried by the outermost quadrature-node shell relative
    to the total; large values mean the declared boxes truncate the integral."""
    sampler = _as_sampler(psihat)
    omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
    tails = _tails(spec, omegas, quad)
    mu = len(quad.u_nodes)
    total = 0.0
    boundary = 0.0
    # node is on the boundary shell if any coordinate is extremal
    u_edge = np.zeros(mu, dtype=bool)
    for ax in range(spec.k):
        col = quad.u_nodes[:, ax]
        u_edge |= (col == col.min()) | (col == col.max())
    for it in range(len(quad.t_nodes)):
        t_edge = False
        for ax in range(spec.d):
            col = quad.t_nodes[:, ax]
            t_edge = t_edge or (quad.t_nodes[it, ax] in (col.min(), col.max()))
        pts = np.empty((len(omegas), mu, spec.n))
        pts[:, :, : spec.k] = quad.u_nodes[None, :, :]
        pts[:, :, spec.k:] = tails[it][:, None, :]
        integ = np.abs(sampler(pts.reshape(-1, spec.n))).reshape(len(omegas), mu) ** 2
        contrib = quad.t_weights[it] * (integ * quad.u_weights[None, :])
        total += contrib.sum()
        edge_mask = u_edge[None, :] | t_edge
        boundary += contrib[np.broadcast_to(edge_mask, contrib.shape)].sum()
    return boundary / max(total, 1e-300)


@dataclass
class AdmissibilityReport:
    """Phi statistics over test frequencies plus the verdict."""

    phi_values: np.ndarray
    frequencies: np.ndarray
    phi_min: float
    phi_max: float
    phi_mean: float
    relative_spread: float
    c_psi: float
    verdict: str  # admissible | weakly-admissible | not-admissible | inconclusive
    spread_tol: float
    boundary_mass: float
    notes: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "phi_min": self.phi_min,
            "phi_max": self.phi_max,
            "phi_mean": self.phi_mean,
            "relative_spread": self.relative_spread,
            "c_psi": self.c_psi,
            "verdict": self.verdict,
            "spread_tol": self.spread_tol,
            "boundary_mass": self.boundary_mass,
            "frequencies": self.frequencies.tolist(),
            "phi_values": self.phi_values.tolist(),
            "notes": self.notes,
        }


def admissibility_report(spec, psihat, test_frequencies, quad, spread_tol=0.02,
                         boundary_tol=1e-4, growth_check=True):
    """Verdict per the Calderon criterion on the sampled frequencies.

    admissible: Phi approximately a positive constant (relative spread within
    spread_tol).  weakly-admissible: Phi bounded between positive constants.
    not-admissible: Phi vanishes on part of the sample, or keeps growing when
    the t-box is enlarged (divergence).  inconclusive: the declared quadrature
    boxes truncate the integrand (boundary mass above tolerance).
    """
    test_frequencies = np.atleast_2d(np.asarray(test_frequencies, dtype=float))
    sampler = _as_sampler(psihat)
    phis = phi_psi_many(spec, psihat, test_frequencies, quad, sampler=sampler)
    bmass = boundary_mass_fraction(spec, psihat, test_frequencies, quad)
    pmin, pmax, pmean = float(phis.min()), float(phis.max()), float(phis.mean())
    spread = (pmax - pmin) / pmean if pmean > 0 else np.inf
    notes = {}

    grew = False
    if growth_check and spec.d:
        wide = QuadratureScheme.build(
            [list(b) for b in quad.u_box],
            [[2 * lo, 2 * hi] for lo, hi in quad.t_box],
            n_u=len(np.unique(quad.u_nodes[:, 0])) if spec.k else 1,
            n_t=2 * int(round(len(quad.t_nodes) ** (1.0 / spec.d))),
            kind=quad.kind)
        phis_wide = phi_psi_many(spec, psihat, test_frequencies, wide,
                                 sampler=sampler)
        growth = float(phis_wide.mean() / pmean) if pmean > 0 else np.inf
        notes["t_box_doubling_growth"] = growth
        grew = growth > 1.5

    if bmass > boundary_tol and not grew:
        verdict = "inconclusive"
    elif pmean == 0 or pmin < 1e-6 * pmax:
        verdict = "not-admissible"
    elif grew:
        verdict = "not-admissible"
    elif spread <= spread_tol:
        verdict = "admissible"
    else:
        verdict = "weakly-admissible"
    return AdmissibilityReport(
        phi_values=phis, frequencies=test_frequencies,
        phi_min=pmin, phi_max=pmax, phi_mean=pmean,
        relative_spread=float(spread), c_psi=pmean, verdict=verdict,
        spread_tol=spread_tol, boundary_mass=float(bmass), notes=notes)


def normalize_admissible(spec, psihat0, quad, support_rel_threshold=1e-6):
    """Admissible-vector construction: psihat = psihat0 / Phi^{1/2} pointwise.

    Phi is evaluated at every frequency node inside the support of psihat0
    (relative magnitude above support_rel_threshold); the output vanishes
    outside.  Fails if Phi degenerates on the support.
    """
    if not isinstance(psihat0, GridFunction) or psihat0.domain != "frequency":
        raise ValueError("normalize_admissible expects a frequency-domain grid")
    sampler = SpectrumSampler(psihat0)
    mag = np.abs(psihat0.data)
    mask = mag > support_rel_threshold * mag.max(initial=0.0)
    grids = psihat0.meshgrid()
    nodes = np.stack([g.ravel() for g in grids], axis=-1)[mask.ravel()]
    phis = phi_psi_many(spec, psihat0, nodes, quad, sampler=sampler)
    # absolute degeneracy scale: Phi of a unit-height wavelet cannot exceed
    # the quadrature measure, so far below that everything is numerical dust
    measure = float(np.sum(quad.u_weights) * np.sum(quad.t_weights))
    floor = 1e-14 * float(mag.max(initial=0.0)) ** 2 * measure
    if (not phis.size or phis.max(initial=0.0) <= floor
            or (phis < 1e-12 * phis.max(initial=0.0)).any()):
        raise ValueError("Phi vanishes on the wavelet support; cannot normalize")
    out = np.zeros_like(psihat0.data)
    out[mask] = psihat0.data[mask] / np.sqrt(phis)
    return psihat0.with_data(out)


def weight_Psi(spec, eta, gamma_base, tol=1e-10, max_iter=80):
    """Orbit weight at eta on the open free orbit through gamma_base.

    Solves eta = h(t)^T (gamma_base - iota(xi)) by Gauss-Newton (unique
    solution by freeness) and returns Delta_{V x| H^T}(xi, h) / |det h|
    = |det(h^T|V)| / (Delta_H(t) |det h|).
    """
    from .dual import solve_reach

    eta = np.asarray(eta, dtype=float).reshape(spec.n)
    gamma_base = np.asarray(gamma_base, dtype=float).reshape(spec.n)
    # h(t)^T (gamma - iota(xi)) = h(-t)^{-T} (gamma - iota(xi)) = act at -t
    sol = solve_reach(spec, gamma_base, eta, tol=tol, max_iter=max_iter)
    if sol is None:
        raise ValueError("point is not reachable from gamma_base (off-orbit?)")
    xi, t_neg = sol
    t = -t_neg
    h = dilation_matrix(spec, t)
    dh = spec.delta_h(t) if spec.delta_h is not None else 1.0
    return det_restricted(spec, h) / (dh * abs(np.linalg.det(h)))


def weighted_norm_check(psihat, psi_weight, region=None, inner_cutoffs=None):
    """Frequency-grid quadrature of |psihat|^2 Psi over a region.

    psi_weight: callable points (m, n) -> weights.  region: boolean-mask
    callable or None for everywhere.  When inner_cutoffs is given (decreasing
    positive numbers), re-evaluates with the region shrunk to
    |last coordinate| >= cutoff and reports the trend, so a 1/v-type
    divergence at the orbit boundary shows up as unbounded growth.
    """
    if psihat.domain != "frequency":
        raise ValueError("weighted_norm_check expects a frequency-domain grid")
    grids = psihat.meshgrid()
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    dens = np.abs(psihat.data.ravel()) ** 2
    base_mask = np.ones(len(pts), dtype=bool) if region is None else np.asarray(
        region(pts), dtype=bool)

    def quad_over(mask):
        if not mask.any():
            return 0.0
        w = np.asarray(psi_weight(pts[mask]), dtype=float)
        return float(np.sum(dens[mask] * w) * psihat.cell())

    value = quad_over(base_mask)
    trend = []
    if inner_cutoffs is not None:
        last = pts[:, -1]
        for c in inner_cutoffs:
            trend.append(quad_over(base_mask & (np.abs(last) >= c)))
    return {"value": value, "cutoff_values": trend,
            "cutoffs": list(inner_cutoffs or [])}
