"""Dual action of V x| H^T on frequency space and its orbit structure.

The action sends a frequency gamma to h(t)^{-T} (gamma - iota(xi)), where iota
embeds V coordinates into R^n.  Open free orbits of this action are what make
a group admissible; this module decides openness, classifies orbits by
reachability, probes stabilizers for compactness, and checks how the induced
orbit-space measure scales under dilations of frequency space.
"""

from dataclasses import dataclass, field

import numpy as np

from .group import dilation_matrix

RANK_TOL = 1e-9
SOLVE_TOL = 1e-10


def act(spec, gamma, xi, t):
    """Apply (xi, t) in V x| H^T to frequencies gamma: h(t)^{-T}(gamma - iota(xi)).

    gamma may be a single vector (n,) or a batch (m, n).
    """
    gamma = np.asarray(gamma, dtype=float)
    shifted = gamma - spec.embed(xi)
    h = dilation_matrix(spec, t)
    # h^{-T} gamma  ==  solve(h^T, gamma)
    return np.linalg.solve(h.T, shifted.T).T if shifted.ndim > 1 else np.linalg.solve(
        h.T, shifted)


def action_jacobian(spec, gamma, xi=None, t=None, eps=1e-6):
    """Jacobian of (xi, t) -> act(spec, gamma, xi, t) at the given parameters,
    an n x (k + d) matrix (central finite differences).

    At the identity the columns are exactly -e_1..-e_k and -X_i^T gamma, but
    the finite-difference form also serves points away from the identity.
    """
    xi = np.zeros(spec.k) if xi is None else np.asarray(xi, dtype=float)
    t = np.zeros(spec.d) if t is None else np.asarray(t, dtype=float)
    cols = []
    for i in range(spec.k):
        dxi = np.zeros(spec.k)
        dxi[i] = eps
        cols.append((act(spec, gamma, xi + dxi, t) - act(spec, gamma, xi - dxi, t))
                    / (2 * eps))
    for i in range(spec.d):
        dt = np.zeros(spec.d)
        dt[i] = eps
        cols.append((act(spec, gamma, xi, t + dt) - act(spec, gamma, xi, t - dt))
                    / (2 * eps))
    if not cols:
        return np.zeros((spec.n, 0))
    return np.stack(cols, axis=-1)


def jacobian_rank_at(spec, gamma, xi=None, t=None, tol=RANK_TOL):
    """Rank of the action differential at (xi, t) applied to gamma."""
    jac = action_jacobian(spec, gamma, xi, t)
    if jac.shape[1] == 0:
        return 0
    svals = np.linalg.svd(jac, compute_uv=False)
    scale = max(svals[0], 1.0)
    return int(np.sum(svals > tol * scale))


def is_orbit_open(spec, gamma):
    """The orbit through gamma is open iff the differential is surjective."""
    return jacobian_rank_at(spec, gamma) == spec.n


def solve_reach(spec, gamma_from, gamma_to, starts=None, max_iter=60,
                tol=SOLVE_TOL, n_starts=8, seed=0):
    """Try to solve act(gamma_from; xi, t) = gamma_to by damped Gauss-Newton
    with multistart.  Returns (xi, t) on success, None otherwise."""
    gamma_from = np.asarray(gamma_from, dtype=float)
    gamma_to = np.asarray(gamma_to, dtype=float)
    rng = np.random.default_rng(seed)
    if starts is None:
        box = spec.params_box
        starts = [np.zeros(spec.k + spec.d)]
        for _ in range(n_starts - 1):
            xi0 = rng.uniform(-3, 3, spec.k)
            t0 = rng.uniform(box[:, 0], box[:, 1]) if spec.d else np.zeros(0)
            starts.append(np.concatenate([xi0, t0]))
    scale = max(np.linalg.norm(gamma_to), 1.0)
    for p0 in starts:
        p = np.array(p0, dtype=float)
        best = np.inf
        stall = 0
        for _ in range(max_iter):
            xi, t = p[: spec.k], p[spec.k:]
            res = act(spec, gamma_from, xi, t) - gamma_to
            rnorm = np.linalg.norm(res)
            if rnorm <= tol * scale:
                return xi.copy(), t.copy()
            # give up on this start once progress stalls
            if rnorm > 0.7 * best:
                stall += 1
                if stall >= 6:
                    break
            else:
                stall = 0
            best = min(best, rnorm)
            jac = action_jacobian(spec, gamma_from, xi, t)
            try:
                step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(step) > 2.0:
                step *= 2.0 / np.linalg.norm(step)
            # damped line search on the residual norm
            lam = 1.0
            improved = False
            for _ in range(12):
                cand = np.clip(p + lam * step, -12.0, 12.0)
                try:
                    r2 = act(spec, gamma_from, cand[: spec.k], cand[spec.k:]) - gamma_to
                except np.linalg.LinAlgError:
                    lam *= 0.5
                    continue
                if np.isfinite(r2).all() and np.linalg.norm(r2) < rnorm:
                    p = cand
                    improved = True
                    break
                lam *= 0.5
            if not improved:
                break
        xi, t = p[: spec.k], p[spec.k:]
        if np.linalg.norm(act(spec, gamma_from, xi, t) - gamma_to) <= tol * scale:
            return xi.copy(), t.copy()
    return None


def stabilizer_scan(spec, gamma, grid_per_dim=None, tol=SOLVE_TOL,
                    box_scales=(1.0, 2.0, 4.0)):
    """Probe the stabilizer of gamma inside V x| H^T.

    Seeds a parameter grid, polishes each seed by Gauss-Newton on
    act(gamma) = gamma, and deduplicates solutions.  Returns a dict with the
    solutions found, the stabilizer dimension inferred from the rank drop of
    the differential at each solution, and a compactness verdict obtained by
    growing the search box: a stabilizer whose solution set keeps extending to
    the boundary as the box doubles is reported noncompact.
    """
    gamma = np.asarray(gamma, dtype=float)
    p_dim = spec.k + spec.d
    if p_dim == 0:
        return {"solutions": [np.zeros(0)], "dim": 0, "compact": True, "free": True}
    if grid_per_dim is None:
        # keep the total seed count bounded as the parameter dimension grows
        grid_per_dim = {1: 9, 2: 7, 3: 5, 4: 4}.get(p_dim, 3)

    all_sols = []
    max_radius_by_scale = []
    for scale in box_scales:
        box = np.concatenate([
            np.tile([-3.0 * scale, 3.0 * scale], (spec.k, 1)),
            spec.params_box * scale if spec.d else np.zeros((0, 2)),
        ])
        axes = [np.linspace(lo, hi, grid_per_dim) for lo, hi in box]
        grids = np.meshgrid(*axes, indexing="ij") if p_dim else []
        seeds = np.stack([g.ravel() for g in grids], axis=-1)
        sols = []
        scale_ref = max(np.linalg.norm(gamma), 1.0)
        for seed_p in seeds:
            p = seed_p.copy()
            best = np.inf
            stall = 0
            for _ in range(60):
                xi, t = p[: spec.k], p[spec.k:]
                res = act(spec, gamma, xi, t) - gamma
                rnorm = np.linalg.norm(res)
                if rnorm <= tol * scale_ref:
                    break
                if rnorm > 0.7 * best:
                    stall += 1
                    if stall >= 6:
                        break
                else:
                    stall = 0
                best = min(best, rnorm)
                jac = action_jacobian(spec, gamma, xi, t)
                try:
                    step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
                except np.linalg.LinAlgError:
                    break
                if np.linalg.norm(step) > 2.0 * scale:
                    step *= 2.0 * scale / np.linalg.norm(step)
                p = np.clip(p + step, -12.0 * scale, 12.0 * scale)
            xi, t = p[: spec.k], p[spec.k:]
            if np.linalg.norm(act(spec, gamma, xi, t) - gamma) <= tol * scale_ref:
                sols.append(p)
        # deduplicate
        uniq = []
        for s in sols:
            if not any(np.linalg.norm(s - u) < 1e-6 for u in uniq):
                uniq.append(s)
        all_sols = uniq
        max_radius_by_scale.append(
            max((np.linalg.norm(s) for s in uniq), default=0.0))

    # stabilizer dimension: rank drop of the differential at each solution
    dims = []
    for s in all_sols:
        rank = jacobian_rank_at(spec, gamma, s[: spec.k], s[spec.k:])
        dims.append(p_dim - rank)
    dim = max(dims, default=0)

    # compactness: positive-dimensional stabilizers of these one-parameter
    # families are closed subgroups isomorphic to R^m, hence noncompact;
    # zero-dimensional ones are compact iff the solution set stopped growing
    # with the box (finite set).
    if dim >= 1:
        compact = False
    else:
        r = max_radius_by_scale
        compact = (len(r) < 2) or (r[-1] <= r[0] + 1e-6)
    return {
        "solutions": all_sols,
        "dim": dim,
        "compact": compact,
        "free": len(all_sols) <= 1 and dim == 0,
    }


def _find(parents, i):
    while parents[i] != i:
        parents[i] = parents[parents[i]]
        i = parents[i]
    return i


def classify_orbits(spec, probes=None, probe_scale=1.0, seed=0):
    """Group probe frequencies into orbits by pairwise reachability.

    Returns a list of orbit dicts {representative, members, open, free,
    compact_stabilizer}.  Probes default to the +-probe_scale sign pattern
    corners plus a few random points (orbits of these groups are unions of
    sign chambers, so corners find them all).
    """
    if probes is None:
        corners = np.array(np.meshgrid(*([[-probe_scale, probe_scale]] * spec.n),
                                       indexing="ij")).reshape(spec.n, -1).T
        rng = np.random.default_rng(seed)
        extra = rng.uniform(-2 * probe_scale, 2 * probe_scale, (4, spec.n))
        extra = extra[np.all(np.abs(extra) > 0.1, axis=1)]
        probes = np.concatenate([corners, extra])
    probes = np.asarray(probes, dtype=float)
    m = len(probes)
    parents = list(range(m))
    for i in range(m):
        for j in range(i + 1, m):
            if _find(parents, i) == _find(parents, j):
                continue
            # reachability is symmetric (group action); try both directions,
            # since Gauss-Newton can converge from one side but stall from the
            # other when the dilation scales are very asymmetric
            if (solve_reach(spec, probes[i], probes[j]) is not None
                    or solve_reach(spec, probes[j], probes[i]) is not None):
                parents[_find(parents, j)] = _find(parents, i)
    groups = {}
    for i in range(m):
        groups.setdefault(_find(parents, i), []).append(i)
    orbits = []
    for root, members in sorted(groups.items()):
        rep = probes[root]
        stab = stabilizer_scan(spec, rep)
        orbits.append({
            "representative": rep,
            "members": [probes[i] for i in members],
            "open": is_orbit_open(spec, rep),
            "free": stab["free"],
            "compact_stabilizer": stab["compact"],
            "stabilizer_dim": stab["dim"],
        })
    return orbits


@dataclass
class OrbitReport:
    """Summary of the dual-orbit analysis for one group."""

    n: int
    k: int
    d: int
    open_orbit_count: int
    orbits: list = field(default_factory=list)
    all_open_free: bool = False
    all_stabilizers_compact: bool = False
    has_open_orbits: bool = False

    def to_json_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "open_orbit_count": self.open_orbit_count,
            "has_open_orbits": self.has_open_orbits,
            "all_open_free": self.all_open_free,
            "all_stabilizers_compact": self.all_stabilizers_compact,
            "orbits": [
                {
                    "representative": list(o["representative"]),
                    "open": bool(o["open"]),
                    "free": bool(o["free"]),
                    "compact_stabilizer": bool(o["compact_stabilizer"]),
                    "stabilizer_dim": int(o["stabilizer_dim"]),
                    "member_count": len(o["members"]),
                }
                for o in self.orbits
            ],
        }


def orbit_report(spec, probes=None):
    """Classify orbits and aggregate the admissibility-relevant flags."""
    orbits = classify_orbits(spec, probes=probes)
    open_orbits = [o for o in orbits if o["open"]]
    return OrbitReport(
        n=spec.n,
        k=spec.k,
        d=spec.d,
        open_orbit_count=len(open_orbits),
        orbits=orbits,
        has_open_orbits=bool(open_orbits),
        all_open_free=bool(open_orbits) and all(o["free"] for o in open_orbits),
        all_stabilizers_compact=all(o["compact_stabilizer"] for o in orbits),
    )


def build_transversal(entry, n_points=64, span=4.0):
    """Sample the analytic cross-section attached to a catalog entry.

    For groups without open orbits the cross-section parameterizes the orbit
    space; the returned array has shape (n_points**transversal_dim, n)."""
    if entry.transversal is None:
        raise ValueError(f"catalog entry {entry.id} carries no cross-section")
    dim = entry.transversal_dim
    axis = np.linspace(-span, span, n_points + 1)
    axis = axis[np.abs(axis) > 1e-9]  # avoid the measure-zero stratum at 0
    if dim == 1:
        return np.asarray(entry.transversal(axis))
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    params = np.stack([g.ravel() for g in grids], axis=-1)
    return np.asarray(entry.transversal(params))


def transversal_is_section(spec, points, tol=SOLVE_TOL):
    """Check no two cross-section points lie on the same orbit and each point's
    orbit is reached from itself (sanity).  Quadratic in len(points); use a
    small sample."""
    points = np.asarray(points, dtype=float)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if solve_reach(spec, points[i], points[j], tol=tol) is not None:
                return False
    return True


def orbit_measure_scaling(spec, a, base_points, radius=0.4, n_mc=20000,
                          quad_nodes=24, seed=0):
    """Ratio lambda(a B)/lambda(B) of the orbit-space measure of a ball B of
    cross-section points under the dilation gamma -> a gamma.

    The measure of a transversal patch B is computed as the Lebesgue measure
    of the tube swept by B under a fixed parameter window K, divided by the
    Haar mass of K in V x| H^T: lambda(B) = Leb(S_B) / mu(K) with
    S_B = {act(gamma(s); xi, t) : s in B, (xi, t) in K}.  Leb(S_B) is the
    integral of |det J| of the chart (s, xi, t) -> act over B x K, evaluated by
    Gauss-Legendre quadrature with finite-difference Jacobians.
    """
    from numpy.polynomial.legendre import leggauss

    base_points = np.asarray(base_points, dtype=float)
    trans_dim = spec.n - spec.k - spec.d
    if trans_dim <= 0:
        raise ValueError("orbit space has dimension 0; scaling is trivial")

    # local curve through the first base point along the remaining directions:
    # use the span of the base points themselves as the transversal chart
    def measure(points):
        # quadrature over (s, xi, t) in B x K of |det d(act)|
        xg, wg = leggauss(quad_nodes)
        # transversal parameter: arclength chart through the points
        # (assumes points form a 1-D curve when trans_dim == 1)
        if trans_dim != 1:
            raise NotImplementedError("scaling check implemented for 1-D orbit spaces")
        seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
        s_cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = 0.0
        # K: unit parameter window
        xi_nodes = 0.5 * xg
        xi_w = 0.5 * wg
        t_nodes = 0.5 * xg
        t_w = 0.5 * wg
        s_nodes = 0.5 * (xg + 1.0) * s_cum[-1]
        s_w = 0.5 * wg * s_cum[-1]

        def curve(s):
            return np.array([np.interp(s, s_cum, points[:, i]) for i in range(spec.n)])

        eps = 1e-5
        for s, ws in zip(s_nodes, s_w):
            g_plus = curve(min(s + eps, s_cum[-1]))
            g_minus = curve(max(s - eps, 0.0))
            dg_ds = (g_plus - g_minus) / (min(s + eps, s_cum[-1])
                                          - max(s - eps, 0.0))
            gamma = curve(s)
            for ix, xiv in enumerate(np.atleast_2d(xi_nodes).T if spec.k else [np.zeros(0)]):
                wxi = xi_w[ix] if spec.k else 1.0
                for it, tv in enumerate(np.atleast_2d(t_nodes).T if spec.d else [np.zeros(0)]):
                    wt = t_w[it] if spec.d else 1.0
                    xiv1 = np.atleast_1d(xiv)[: spec.k]
                    tv1 = np.atleast_1d(tv)[: spec.d]
                    # columns of the full Jacobian
                    cols = [
                        (act(spec, gamma + eps * dg_ds, xiv1, tv1)
                         - act(spec, gamma - eps * dg_ds, xiv1, tv1)) / (2 * eps)
                    ]
                    jac_pt = action_jacobian(spec, gamma, xiv1, tv1)
                    for c in range(jac_pt.shape[1]):
                        cols.append(jac_pt[:, c])
                    J = np.stack(cols, axis=-1)
                    total += ws * wxi * wt * abs(np.linalg.det(J))
        # Haar mass of K in V x| H^T: integral of |det(h^T|V)| over the window
        from .group import det_restricted

        mu = 0.0
        for ix, _ in enumerate(xi_nodes if spec.k else [0.0]):
            wxi = xi_w[ix] if spec.k else 1.0
            for it, tvv in enumerate(t_nodes if spec.d else [0.0]):
                wt = t_w[it] if spec.d else 1.0
                tv1 = np.atleast_1d(tvv)[: spec.d] if spec.d else np.zeros(0)
                h = dilation_matrix(spec, tv1)
                mu += wxi * wt * det_restricted(spec, h)
        return total / mu

    m_base = measure(base_points)
    m_scaled = measure(a * base_points)
    return m_scaled / m_base
