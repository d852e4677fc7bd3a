"""Group algebra of translation complete subgroups G = T x R^n x V x H.

Coordinates: an element is (z, x, xi, t) with z a unit phase, x the
translation, xi the coordinates of the modulation inside the canonical
subspace V = R^k x {0}^(n-k), and t the parameters of the dilation
h(t) = exp(t_1 X_1 + ... + t_d X_d) for commuting generators X_i.

Group law:
    (z1,x1,xi1,t1)(z2,x2,xi2,t2)
        = (z1 z2 exp(-2 pi i <xi1, h1 x2>), x1 + h1 x2, xi1 + h1^{-T} xi2, t1 + t2)

Left Haar measure relative to dz dx dxi dt is |det(h^T|V)| / |det h| (times
the Haar density of H, identically 1 for the abelian charts used here), with
dz normalized to total mass one.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

COMMUTATOR_TOL = 1e-10
BLOCK_TOL = 1e-10
PHASE_TOL = 1e-12


class GroupSpecError(ValueError):
    """Invalid group specification or mismatched elements."""


@dataclass(frozen=True, eq=False)
class TranslationCompleteGroupSpec:
    """Immutable description of a translation complete subgroup.

    generators: array (d, n, n) of commuting matrices X_i spanning the chart
    of H.  `chart` optionally supplies a closed form t -> h(t); the default is
    the matrix exponential.  `delta_h` is the modular density of H as a
    function of t (constantly 1 for the abelian charts of the catalog).
    """

    n: int
    k: int
    generators: np.ndarray  # (d, n, n)
    chart: object = None  # callable t -> (n, n) matrix, or None for expm
    delta_h: object = None  # callable t -> positive float, or None for 1
    params_box: np.ndarray = None  # (d, 2) default parameter box
    name: str = ""

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=float)
        if gens.size == 0:
            gens = gens.reshape(0, self.n, self.n)
        elif gens.ndim == 2:
            gens = gens[None, :, :]
        if gens.shape[1:] != (self.n, self.n):
            raise GroupSpecError(f"generators must be {self.n}x{self.n} matrices")
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        if not 0 <= self.k <= self.n:
            raise GroupSpecError("need 0 <= k <= n")
        for i in range(self.d):
            for j in range(i):
                comm = gens[i] @ gens[j] - gens[j] @ gens[i]
                if np.linalg.norm(comm) > COMMUTATOR_TOL:
                    raise GroupSpecError(
                        f"generators {i} and {j} do not commute "
                        f"(|[Xi,Xj]| = {np.linalg.norm(comm):.2e})"
                    )
        box = self.params_box
        if box is None:
            box = np.tile([-2.0, 2.0], (self.d, 1))
        box = np.asarray(box, dtype=float).reshape(self.d, 2)
        box.setflags(write=False)
        object.__setattr__(self, "params_box", box)

    @property
    def d(self):
        return self.generators.shape[0]

    def embed(self, xi):
        """V coordinates (k,) -> ambient frequency vector (n,)."""
        xi = np.asarray(xi, dtype=float).reshape(self.k)
        out = np.zeros(self.n)
        out[: self.k] = xi
        return out

    def identity(self):
        return GroupElement(self, 1.0 + 0.0j, np.zeros(self.n), np.zeros(self.k),
                            np.zeros(self.d))

    def element(self, z, x, xi, t):
        return GroupElement(self, complex(z), np.asarray(x, dtype=float).reshape(self.n),
                            np.asarray(xi, dtype=float).reshape(self.k),
                            np.atleast_1d(np.asarray(t, dtype=float)).reshape(self.d))

    def to_json_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "generators": [g.tolist() for g in self.generators],
            "chart": self.name if (self.chart is not None and self.name) else "exp",
            "params_box": self.params_box.tolist(),
        }


@dataclass(frozen=True, eq=False)
class GroupElement:
    spec: TranslationCompleteGroupSpec
    z: complex
    x: np.ndarray  # (n,)
    xi: np.ndarray  # (k,) coordinates inside V
    t: np.ndarray  # (d,)

    def __post_init__(self):
        if abs(abs(self.z) - 1.0) > PHASE_TOL:
            raise GroupSpecError(f"phase must have unit modulus, got |z|={abs(self.z)}")
        for arr in (self.x, self.xi, self.t):
            arr.setflags(write=False)

    def components(self):
        return self.z, self.x, self.xi, self.t


@dataclass(frozen=True)
class HaarWeights:
    """Haar density and the modular values at one group element."""

    density: float
    delta_g_closed_form: float
    delta_g_numeric: float
    delta_h: float
    delta_semidirect: float  # modular function of V x| H^T
    numeric_reliable: bool


def dilation_matrix(spec, t):
    """h(t), via the closed-form chart when the spec carries one, else expm."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if spec.chart is not None:
        return np.asarray(spec.chart(t), dtype=float)
    if spec.d == 0:
        return np.eye(spec.n)
    return expm(np.tensordot(t, spec.generators, axes=1))


def restricted_block(spec, h):
    """Matrix of h^T|V in V coordinates (the transposed top-left k x k block)."""
    return h[: spec.k, : spec.k].T


def det_restricted(spec, h):
    """|det(h^T|V)|; raises if h violates the block condition for V."""
    k = spec.k
    if k < spec.n and np.abs(h[:k, k:]).max(initial=0.0) > BLOCK_TOL:
        raise GroupSpecError("matrix does not leave V invariant under transpose")
    if k == 0:
        return 1.0
    return abs(np.linalg.det(h[:k, :k]))


def check_translation_complete(spec):
    """True iff h(t)^T V is contained in V for all t, i.e. every generator has a
    vanishing top-right k x (n-k) block."""
    k = spec.k
    if k == spec.n or spec.d == 0:
        return True
    return all(np.abs(g[:k, k:]).max(initial=0.0) <= BLOCK_TOL for g in spec.generators)


def _check_same_spec(g1, g2):
    s1, s2 = g1.spec, g2.spec
    if s1 is s2:
        return
    if (s1.n, s1.k, s1.d) != (s2.n, s2.k, s2.d) or not np.array_equal(
        s1.generators, s2.generators
    ):
        raise GroupSpecError("elements belong to different group specs")


def multiply(g1, g2):
    """Group product; the phase is renormalized to stop drift."""
    _check_same_spec(g1, g2)
    spec = g1.spec
    h1 = dilation_matrix(spec, g1.t)
    phase = np.exp(-2j * np.pi * (spec.embed(g1.xi) @ (h1 @ g2.x)))
    z = g1.z * g2.z * phase
    z /= abs(z)
    x = g1.x + h1 @ g2.x
    # h1^{-T} leaves V invariant; its V-coordinate matrix is inv(h^T|V)
    xi = g1.xi + np.linalg.solve(restricted_block(spec, h1), g2.xi) if spec.k else g1.xi
    return GroupElement(spec, z, x, np.atleast_1d(xi).reshape(spec.k), g1.t + g2.t)


def inverse(g):
    spec = g.spec
    h = dilation_matrix(spec, g.t)
    x_inv = -np.linalg.solve(h, g.x)
    xi_inv = -(restricted_block(spec, h) @ g.xi) if spec.k else g.xi
    z_inv = np.conj(g.z) * np.exp(-2j * np.pi * (spec.embed(g.xi) @ g.x))
    z_inv /= abs(z_inv)
    return GroupElement(spec, z_inv, x_inv, np.atleast_1d(xi_inv).reshape(spec.k), -g.t)


def haar_density(spec, g):
    """Left Haar density at g relative to dz dx dxi dt."""
    h = dilation_matrix(spec, g.t)
    dh = spec.delta_h(g.t) if spec.delta_h is not None else 1.0
    return det_restricted(spec, h) / abs(np.linalg.det(h)) * dh


def delta_semidirect(spec, t):
    """Modular function of V x| H^T at parameter t: |det(h^T|V)| / Delta_H."""
    h = dilation_matrix(spec, t)
    dh = spec.delta_h(t) if spec.delta_h is not None else 1.0
    return det_restricted(spec, h) / dh


def delta_g_closed_form(spec, t):
    """Modular function of G from the semidirect-product formula:
    Delta_G = Delta_H * |det(h^T|V)| / |det h|."""
    h = dilation_matrix(spec, t)
    dh = spec.delta_h(t) if spec.delta_h is not None else 1.0
    return dh * det_restricted(spec, h) / abs(np.linalg.det(h))


def delta_g_numeric(spec, t0, box_half_width=14.0, nodes=240):
    """Modular function of G at parameter t0, estimated from the Haar integral.

    Right-translating a test function rescales the left Haar integral by
    Delta_G.  The x and xi integrals are invariant under the translations
    induced by right multiplication and drop out exactly, leaving a d-dim
    quadrature of a Gaussian bump against the Haar density in t.
    """
    t0 = np.atleast_1d(np.asarray(t0, dtype=float))
    if spec.d == 0:
        return 1.0
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    half = box_half_width + np.abs(t0).max()
    nodes_1d = xg * half
    w_1d = wg * half
    grids = np.meshgrid(*([nodes_1d] * spec.d), indexing="ij")
    ts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([w_1d] * spec.d), indexing="ij")
    ws = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)

    def bump(tt):
        return np.exp(-0.5 * np.sum(tt**2, axis=-1))

    dens = np.array([haar_density(spec, spec.element(1, np.zeros(spec.n),
                                                     np.zeros(spec.k), tt))
                     for tt in ts])
    num = np.sum(bump(ts - t0) * dens * ws)
    den = np.sum(bump(ts) * dens * ws)
    return num / den


def modular_functions(spec, g, reliability_tol=0.05):
    """All modular data at g, with both the closed-form Delta_G and an
    independent quadrature estimate."""
    dh = spec.delta_h(g.t) if spec.delta_h is not None else 1.0
    closed = delta_g_closed_form(spec, g.t)
    numeric = delta_g_numeric(spec, g.t)
    rel = abs(numeric - closed) / max(abs(closed), 1e-300)
    return HaarWeights(
        density=haar_density(spec, g),
        delta_g_closed_form=closed,
        delta_g_numeric=numeric,
        delta_h=dh,
        delta_semidirect=delta_semidirect(spec, g.t),
        numeric_reliable=rel <= reliability_tol,
    )


def is_unimodular(spec, sample_box=None, samples_per_dim=7, tol=1e-8):
    """True iff Delta_G = 1 at all sampled parameters of the box."""
    if spec.d == 0:
        return True
    box = np.asarray(sample_box, dtype=float) if sample_box is not None else spec.params_box
    box = box.reshape(spec.d, 2)
    axes = [np.linspace(lo, hi, samples_per_dim) for lo, hi in box]
    grids = np.meshgrid(*axes, indexing="ij")
    ts = np.stack([g.ravel() for g in grids], axis=-1)
    return all(abs(delta_g_closed_form(spec, t) - 1.0) <= tol for t in ts)


def spec_from_json(doc, catalog_resolver=None):
    """Build a spec from the normative JSON document

        {"n": int, "k": int, "generators": [...], "chart": "exp" | catalog id,
         "params_box": [[lo, hi], ...]}

    Named charts are resolved through `catalog_resolver` (catalog.resolve_chart
    by default, imported lazily to avoid a module cycle).
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    chart_id = doc.get("chart", "exp")
    chart = None
    name = ""
    if chart_id != "exp":
        if catalog_resolver is None:
            from .catalog import resolve_chart as catalog_resolver
        chart = catalog_resolver(chart_id)
        name = chart_id
    return TranslationCompleteGroupSpec(
        n=int(doc["n"]),
        k=int(doc["k"]),
        generators=np.asarray(doc["generators"], dtype=float),
        chart=chart,
        params_box=doc.get("params_box"),
        name=name,
    )
