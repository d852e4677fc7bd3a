"""Constructors for the concrete low-dimensional group families, bundled with
their expected orbit/admissibility structure as reference metadata.

Each entry carries both a closed-form chart and the generator matrices; the
test suite cross-validates the two, which catches transcription slips in the
series expansions.
"""

from dataclasses import dataclass

import numpy as np

from .group import TranslationCompleteGroupSpec


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    spec: TranslationCompleteGroupSpec
    expected: dict
    # optional analytic transversal: callable mapping an array of curve
    # parameters (m, transversal_dim) to representatives (m, n)
    transversal: object = None
    transversal_dim: int = 0


def _ramp(a, t):
    """f(t) = c-free part of the off-diagonal entry: (e^{ta} - e^t)/(a - 1),
    continued through a = 1 where it equals t e^t."""
    if abs(a - 1.0) < 1e-8:
        return t * np.exp(t)
    return (np.exp(t * a) - np.exp(t)) / (a - 1.0)


def dim2_family(a=0.0, c=1.0):
    """n=2, V = R x {0}, H = exp(t X) with X = [[a, 0], [c, 1]].

    Closed form h(t) = [[e^{ta}, 0], [c f(t), e^t]] with
    f(t) = (e^{ta} - e^t)/(a-1), continued as t e^t at a = 1.
    Two free open orbits R x (+-R^+); nonunimodular; discrete series on each.
    """

    def chart(t):
        tt = float(np.atleast_1d(t)[0])
        return np.array([[np.exp(tt * a), 0.0], [c * _ramp(a, tt), np.exp(tt)]])

    spec = TranslationCompleteGroupSpec(
        n=2, k=1,
        generators=np.array([[[a, 0.0], [c, 1.0]]]),
        chart=chart,
        params_box=[[-2.0, 2.0]],
        name=f"dim2_family:{a},{c}",
    )
    return CatalogEntry(
        id=spec.name,
        spec=spec,
        expected={
            "open_orbit_count": 2,
            "orbit_signs": "sign of the last frequency coordinate",
            "free": True,
            "compact_stabilizers": True,
            "unimodular": False,
            "group_admissible": True,
        },
        transversal=lambda s: np.column_stack([np.zeros(len(s)), np.sign(s) * 1.0]),
        transversal_dim=1,
    )


def dim3_diag(alpha=1.0, beta=2.0, which_v=2):
    """n=3, H = diag(e^{alpha x}, e^{beta x}, e^x), beta != 0.

    which_v=1: V = R x {0}^2, no open orbits (k + d = 2 < 3) but a Borel
    transversal {0} x {+-1} x R exists, so the group is weakly admissible.
    which_v=2: V = R^2 x {0}, two free open orbits R x R x (+-R^+): the
    xi_2-translations make the second coordinate free before the scaling acts,
    so only the sign of the last coordinate is an orbit invariant.  (A count
    of four is sometimes quoted for this family by reusing the V_1-style
    computation, but that treats xi as shifting the first coordinate only.)
    """
    if beta == 0:
        raise ValueError("beta must be nonzero")

    def chart(t):
        tt = float(np.atleast_1d(t)[0])
        return np.diag([np.exp(alpha * tt), np.exp(beta * tt), np.exp(tt)])

    k = 1 if which_v == 1 else 2
    spec = TranslationCompleteGroupSpec(
        n=3, k=k,
        generators=np.array([np.diag([alpha, beta, 1.0])]),
        chart=chart,
        params_box=[[-2.0, 2.0]],
        name=f"dim3_diag:{alpha},{beta},{which_v}",
    )
    if which_v == 1:
        def transversal(s):
            s = np.asarray(s, dtype=float)
            return np.column_stack([np.zeros(len(s)), np.sign(s), np.abs(s)])

        expected = {
            "open_orbit_count": 0,
            "free": True,
            "compact_stabilizers": True,
            "unimodular": None,  # depends on parameters; see modular report
            "group_weakly_admissible": True,
        }
        return CatalogEntry(spec.name, spec, expected, transversal, 1)
    expected = {
        "open_orbit_count": 2,
        "published_open_orbit_count": 4,  # see docstring: V_1-style miscount
        "free": True,
        "compact_stabilizers": True,
        "unimodular": False,
        "group_admissible": True,
    }
    return CatalogEntry(spec.name, spec, expected)


def dim3_jordan(alpha=1.0, beta=1.0):
    """n=3, Jordan-type block: h = [[e^{ax}, x e^{ax}, 0], [0, e^{ax}, 0],
    [0, 0, e^{bx}]]; only V = R^2 x {0} is compatible; two free open orbits."""
    if beta == 0:
        raise ValueError("beta must be nonzero")

    def chart(t):
        tt = float(np.atleast_1d(t)[0])
        ea = np.exp(alpha * tt)
        return np.array([
            [ea, tt * ea, 0.0],
            [0.0, ea, 0.0],
            [0.0, 0.0, np.exp(beta * tt)],
        ])

    spec = TranslationCompleteGroupSpec(
        n=3, k=2,
        generators=np.array([[[alpha, 1.0, 0.0], [0.0, alpha, 0.0], [0.0, 0.0, beta]]]),
        chart=chart,
        params_box=[[-2.0, 2.0]],
        name=f"dim3_jordan:{alpha},{beta}",
    )
    expected = {
        "open_orbit_count": 2,
        "free": True,
        "compact_stabilizers": True,
        "unimodular": False,
        "group_admissible": True,
    }
    return CatalogEntry(spec.name, spec, expected)


def dim3_twoparam(alpha=1.0, which_v=1):
    """n=3, H = diag(e^{alpha x}, e^x, e^y), d = 2.

    which_v=1: four free open orbits.  which_v=2: open orbits exist but every
    stabilizer is a noncompact one-parameter family; not discrete series.
    """

    def chart(t):
        tx, ty = np.atleast_1d(t)
        return np.diag([np.exp(alpha * tx), np.exp(tx), np.exp(ty)])

    k = 1 if which_v == 1 else 2
    spec = TranslationCompleteGroupSpec(
        n=3, k=k,
        generators=np.array([np.diag([alpha, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])]),
        chart=chart,
        params_box=[[-2.0, 2.0], [-2.0, 2.0]],
        name=f"dim3_twoparam:{alpha},{which_v}",
    )
    if which_v == 1:
        expected = {
            "open_orbit_count": 4,
            "free": True,
            "compact_stabilizers": True,
            "unimodular": False,
            "group_admissible": True,
        }
    else:
        expected = {
            "open_orbit_count": 2,
            "free": False,
            "compact_stabilizers": False,
            "stabilizer_dim": 1,
            "group_admissible": False,
        }
    return CatalogEntry(spec.name, spec, expected)


def dim3_rotation(alpha=0.0):
    """n=3, rotation-scaling block + e^x; alpha in {0, 1}; only V = R^2 x {0}
    is compatible; two free open orbits R^2 x (+-R^+)."""

    def chart(t):
        tt = float(np.atleast_1d(t)[0])
        ea = np.exp(alpha * tt)
        ct, st = np.cos(tt), np.sin(tt)
        return np.array([
            [ea * ct, ea * st, 0.0],
            [-ea * st, ea * ct, 0.0],
            [0.0, 0.0, np.exp(tt)],
        ])

    spec = TranslationCompleteGroupSpec(
        n=3, k=2,
        generators=np.array([[[alpha, 1.0, 0.0], [-1.0, alpha, 0.0], [0.0, 0.0, 1.0]]]),
        chart=chart,
        params_box=[[-2.0, 2.0]],
        name=f"dim3_rotation:{alpha}",
    )
    expected = {
        "open_orbit_count": 2,
        "free": True,
        "compact_stabilizers": True,
        "unimodular": False,
        "group_admissible": True,
    }
    return CatalogEntry(spec.name, spec, expected)


def heisenberg(n=1):
    """V = R^n, H trivial: the reduced Heisenberg group; unimodular, single
    orbit with trivial stabilizers, admissible for L^2."""
    spec = TranslationCompleteGroupSpec(
        n=n, k=n, generators=np.zeros((0, n, n)), name=f"heisenberg:{n}",
    )
    expected = {
        "open_orbit_count": 1,
        "free": True,
        "compact_stabilizers": True,
        "unimodular": True,
        "group_admissible": True,
    }
    return CatalogEntry(spec.name, spec, expected)


def proper_v_trivial_h(n=2, k=1):
    """Proper V with trivial H: unimodular; weakly admissible for L^2 but not
    strongly admissible (the orbit-space mass is infinite)."""
    spec = TranslationCompleteGroupSpec(
        n=n, k=k, generators=np.zeros((0, n, n)), name=f"proper_v:{n},{k}",
    )

    def transversal(s):
        s = np.asarray(s, dtype=float).reshape(-1, n - k)
        return np.concatenate([np.zeros((len(s), k)), s], axis=1)

    expected = {
        "open_orbit_count": 0,
        "free": True,
        "compact_stabilizers": True,
        "unimodular": True,
        "group_weakly_admissible": True,
        "group_admissible": False,
    }
    return CatalogEntry(spec.name, spec, expected, transversal, n - k)


def affine_1d():
    """V = {0}, H = {e^t}: the classical 1-D wavelet group; two discrete
    series orbits (+-R^+) and the classical Calderon condition."""

    def chart(t):
        return np.array([[np.exp(float(np.atleast_1d(t)[0]))]])

    spec = TranslationCompleteGroupSpec(
        n=1, k=0, generators=np.array([[[1.0]]]), chart=chart,
        params_box=[[-3.0, 3.0]], name="affine_1d",
    )
    expected = {
        "open_orbit_count": 2,
        "free": True,
        "compact_stabilizers": True,
        "unimodular": False,
        "group_admissible": True,
    }
    return CatalogEntry(spec.name, spec, expected)


def baselines():
    return [heisenberg(1), proper_v_trivial_h(2, 1), affine_1d()]


_FACTORIES = {
    "dim2_family": (dim2_family, (float, float)),
    "dim3_diag": (dim3_diag, (float, float, int)),
    "dim3_jordan": (dim3_jordan, (float, float)),
    "dim3_twoparam": (dim3_twoparam, (float, int)),
    "dim3_rotation": (dim3_rotation, (float,)),
    "heisenberg": (heisenberg, (int,)),
    "proper_v": (proper_v_trivial_h, (int, int)),
    "affine_1d": (affine_1d, ()),
}


def entry_ids():
    return sorted(_FACTORIES)


def get_entry(chart_id):
    """Resolve 'family:p1,p2,...' to a CatalogEntry."""
    name, _, params = chart_id.partition(":")
    if name not in _FACTORIES:
        raise KeyError(f"unknown catalog id {name!r}; known: {entry_ids()}")
    factory, types = _FACTORIES[name]
    args = []
    if params:
        for raw, typ in zip(params.split(","), types):
            args.append(typ(float(raw)))
    return factory(*args)


def resolve_chart(chart_id):
    """Chart callable for a named catalog id (used by JSON spec ingestion)."""
    return get_entry(chart_id).spec.chart
