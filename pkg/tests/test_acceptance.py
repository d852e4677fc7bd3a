"""End-to-end acceptance checks, one test per criterion.

Each test states its tolerance and time budget inline and runs at desk scale.
Criterion 7 includes the published orbit count of 4 for the 3-D diagonal
family with the 2-D modulation subspace; the computation yields 2 (the
modulation translations absorb the second coordinate before the scaling
acts), so that single assertion is expected to fail.  See the catalog
docstring for the analysis.
"""

import time

import numpy as np
import pytest

from tcwavelets.admissibility import (
    admissibility_report,
    default_quadrature,
    normalize_admissible,
    phi_psi,
    phi_psi_many,
    weight_Psi,
    weighted_norm_check,
)
from tcwavelets.catalog import get_entry
from tcwavelets.dual import (
    build_transversal,
    orbit_measure_scaling,
    orbit_report,
    transversal_is_section,
)
from tcwavelets.grid import (
    aliasing_margin,
    apply_pi,
    apply_pi_fourier,
    dft,
    frequency_bump,
    idft,
    snap_to_frequency,
    snap_to_grid,
)
from tcwavelets.group import inverse, modular_functions, multiply
from tcwavelets.transform import (
    analyze,
    coefficient_norm_sq,
    group_grid,
    synthesize,
)
from tcwavelets.wigner import equivalence_check, wigner


# Reduced-scale transform grid: N = 64 at L = 12 keeps the Nyquist frequency
# (8/3) above the wavelet band around 2.1.
RT_N, RT_L = 64, 12.0


@pytest.fixture(scope="module")
def small_wavelet(dim2_spec, dim2_quad):
    seed = frequency_bump(2, RT_N, RT_L, center=[0.0, 2.1], width=0.7)
    return normalize_admissible(dim2_spec, seed, dim2_quad)


def test_criterion_01_group_axioms():
    """10^4 random associativity/identity/inverse checks within 1e-10, < 5 s."""
    spec = get_entry("dim2_family:2,1").spec
    rng = np.random.default_rng(0)

    def rand_el():
        return spec.element(np.exp(2j * np.pi * rng.uniform()),
                            rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 1),
                            0.75 * rng.uniform(-2, 2, 1))

    def gap(a, b):
        return max(abs(a.z - b.z), np.abs(a.x - b.x).max(initial=0.0),
                   np.abs(a.xi - b.xi).max(initial=0.0),
                   np.abs(a.t - b.t).max(initial=0.0))

    e = spec.identity()
    worst = 0.0
    start = time.monotonic()
    for _ in range(3334):  # 3 axioms per iteration -> > 10^4 checks
        g1, g2, g3 = rand_el(), rand_el(), rand_el()
        worst = max(worst, gap(multiply(multiply(g1, g2), g3),
                               multiply(g1, multiply(g2, g3))))
        worst = max(worst, gap(multiply(g1, e), g1), gap(multiply(e, g1), g1))
        worst = max(worst, gap(multiply(g1, inverse(g1)), e))
    elapsed = time.monotonic() - start
    assert worst < 1e-10, f"worst axiom deviation {worst:.3e}"
    assert elapsed < 5.0, f"took {elapsed:.1f} s"


def test_criterion_02_representation_covariance(dim2_spec):
    """Space- and frequency-side actions agree within 1e-6 relative L^2 for
    100 grid-snapped elements on an N = 128 band-limited signal, < 1 min."""
    fhat = frequency_bump(2, 128, 16.0, center=[0.2, -0.2], width=0.45)
    fs = idft(fhat)
    scale = np.sqrt(fhat.norm_sq())
    rng = np.random.default_rng(3)
    worst, checked = 0.0, 0
    start = time.monotonic()
    while checked < 100:
        t = rng.uniform(-0.5, 0.5, 1)
        xi_amb, _, _ = snap_to_frequency(fhat, dim2_spec.embed(
            rng.uniform(-0.4, 0.4, 1)))
        if aliasing_margin(dim2_spec, fhat, t, xi_amb) < 0.05:
            continue  # dilated spectrum would leave the Nyquist band
        x, _, _ = snap_to_grid(fs, rng.uniform(-1, 1, 2))
        g = dim2_spec.element(np.exp(2j * np.pi * rng.uniform()), x,
                              xi_amb[:1], t)
        a = dft(apply_pi(dim2_spec, g, fs))
        b = apply_pi_fourier(dim2_spec, g, fhat)
        err = np.sqrt(np.sum(np.abs(a.data - b.data) ** 2) * a.cell()) / scale
        worst = max(worst, err)
        checked += 1
    elapsed = time.monotonic() - start
    assert worst < 1e-6, f"worst covariance error {worst:.3e}"
    assert elapsed < 60.0, f"took {elapsed:.1f} s"


def test_criterion_03_parseval(dim2_spec, dim2_quad, small_wavelet):
    """Coefficient norm matches int |fhat|^2 Phi within 3% for 5 band-limited
    signals, < 5 min."""
    nodes = group_grid(dim2_spec, xi_box=[[-5.5, 9.0]], t_box=[[-1.6, 1.4]],
                       n_xi=48, n_t=32)
    signals = [([0.5, 2.2], 0.5), ([-0.4, 2.0], 0.45), ([0.0, 1.9], 0.6),
               ([0.3, 2.4], 0.4), ([-0.2, 2.3], 0.5)]
    start = time.monotonic()
    for center, width in signals:
        fhat = frequency_bump(2, RT_N, RT_L, center=center, width=width)
        got = coefficient_norm_sq(analyze(dim2_spec, fhat, small_wavelet, nodes))
        pts = np.stack([g.ravel() for g in fhat.meshgrid()], axis=-1)
        mask = np.abs(fhat.data.ravel()) > 1e-8
        phis = phi_psi_many(dim2_spec, small_wavelet, pts[mask], dim2_quad)
        want = float(np.sum(np.abs(fhat.data.ravel()[mask]) ** 2 * phis)
                     * fhat.cell())
        assert abs(got - want) <= 0.03 * want, \
            f"signal {center}: {abs(got / want - 1):.4f} relative"
    elapsed = time.monotonic() - start
    assert elapsed < 300.0, f"took {elapsed:.1f} s"


def test_criterion_04_admissible_vector_construction():
    """Normalized wavelets have Phi in [0.98, 1.02] at 50 frequencies with
    |omega_2| >= 0.1, on both chart parameterizations, < 2 min."""
    rng = np.random.default_rng(42)
    freqs = np.empty((50, 2))
    freqs[:, 0] = rng.uniform(-2.0, 2.0, 50)
    freqs[:, 1] = rng.choice([-1.0, 1.0], 50) * rng.uniform(0.1, 3.0, 50)
    start = time.monotonic()
    for cid in ("dim2_family:0,1", "dim2_family:2,1"):
        spec = get_entry(cid).spec
        up = frequency_bump(2, 128, 16.0, center=[0.0, 2.1], width=0.7)
        dn = frequency_bump(2, 128, 16.0, center=[0.0, -2.1], width=0.7)
        seed = up.with_data(up.data + dn.data)  # mass on both open orbits
        quad = default_quadrature(spec, band_center=np.array([0.0]),
                                  band_halfwidth=4.0, t_box=[[-4.0, 4.5]],
                                  n_u=40, n_t=200)
        psihat = normalize_admissible(spec, seed, quad)
        phis = phi_psi_many(spec, psihat, freqs, quad)
        assert phis.min() >= 0.98 and phis.max() <= 1.02, \
            f"{cid}: Phi in [{phis.min():.4f}, {phis.max():.4f}]"
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"took {elapsed:.1f} s"


def test_criterion_05_reconstruction(dim2_spec, small_wavelet):
    """Analyze -> synthesize round trip within 5% relative L^2, < 10 min."""
    nodes = group_grid(dim2_spec, xi_box=[[-5.5, 9.0]], t_box=[[-1.6, 1.4]],
                       n_xi=48, n_t=32)
    start = time.monotonic()
    for center, width in [([0.5, 2.2], 0.5), ([-0.4, 2.0], 0.45),
                          ([0.0, 1.9], 0.6)]:
        fhat = frequency_bump(2, RT_N, RT_L, center=center, width=width)
        field = analyze(dim2_spec, fhat, small_wavelet, nodes)
        rec = synthesize(dim2_spec, field, small_wavelet, C=1.0)
        fs = idft(fhat)
        resid = np.sqrt(np.sum(np.abs(rec.data - fs.data) ** 2) * fs.cell()
                        / fs.norm_sq())
        assert resid <= 0.05, f"signal {center}: residual {resid:.4f}"
    elapsed = time.monotonic() - start
    assert elapsed < 600.0, f"took {elapsed:.1f} s"


def test_criterion_06_orbit_weight(dim2_spec, dim2_quad, normalized_wavelet):
    """weight_Psi equals 1/eta_2 within 1e-6 at 100 orbit points, and the
    weighted wavelet norm matches Phi at the orbit base point within 2%."""
    base = np.array([0.0, 1.0])
    rng = np.random.default_rng(8)
    for _ in range(100):
        eta = np.array([rng.uniform(-3, 3), rng.uniform(0.1, 5.0)])
        w = weight_Psi(dim2_spec, eta, base)
        assert abs(w - 1.0 / eta[1]) < 1e-6 / eta[1]
    res = weighted_norm_check(normalized_wavelet,
                              lambda p: 1.0 / np.abs(p[:, 1]),
                              region=lambda p: p[:, 1] > 1e-9)
    target = phi_psi(dim2_spec, normalized_wavelet, base, dim2_quad)
    assert abs(res["value"] - target) <= 0.02 * target


def test_criterion_07_orbit_structure_ground_truth():
    """Exact integer orbit counts and stabilizer structure for the seven
    reference configurations, < 10 min total."""
    start = time.monotonic()
    got = {}
    for cid in ("dim2_family:0,1", "dim3_diag:1,2,2", "dim3_diag:1,2,1",
                "dim3_jordan:1,1", "dim3_twoparam:1,1", "dim3_twoparam:1,2",
                "dim3_rotation:0"):
        rep = orbit_report(get_entry(cid).spec)
        opens = [o for o in rep.orbits if o["open"]]
        got[cid] = {
            "open": rep.open_orbit_count,
            "free": all(o["free"] for o in opens) if opens else None,
            "stab_dims": sorted({o["stabilizer_dim"] for o in opens}),
        }
    ent = get_entry("dim3_diag:1,2,1")
    transversal_ok = transversal_is_section(
        ent.spec, build_transversal(ent, n_points=6))
    elapsed = time.monotonic() - start

    want = {
        "dim2_family:0,1": {"open": 2, "free": True, "stab_dims": [0]},
        "dim3_diag:1,2,2": {"open": 4, "free": True, "stab_dims": [0]},
        "dim3_diag:1,2,1": {"open": 0, "free": None, "stab_dims": []},
        "dim3_jordan:1,1": {"open": 2, "free": True, "stab_dims": [0]},
        "dim3_twoparam:1,1": {"open": 4, "free": True, "stab_dims": [0]},
        "dim3_twoparam:1,2": {"open": 2, "free": False, "stab_dims": [1]},
        "dim3_rotation:0": {"open": 2, "free": True, "stab_dims": [0]},
    }
    assert transversal_ok, "no measurable cross-section found for dim3_diag V1"
    assert elapsed < 600.0, f"took {elapsed:.1f} s"
    assert got == want


def test_criterion_08_orbit_measure_scaling():
    """The orbit-space measure scales as |a|^(n - dim V) within 3% for
    a in {2, 1/2}, on the trivial-dilation baseline and the 3-D diagonal
    family with 1-D modulation subspace."""
    ent = get_entry("proper_v:2,1")
    base = build_transversal(ent, n_points=8)
    for a, want in [(2.0, 2.0), (0.5, 0.5)]:  # n - dim V = 1
        ratio = orbit_measure_scaling(ent.spec, a, base)
        assert abs(ratio - want) <= 0.03 * want, f"proper_v a={a}: {ratio:.4f}"
    ent = get_entry("dim3_diag:1,2,1")
    base = ent.transversal(np.linspace(0.5, 2.0, 9))  # one sign branch
    for a, want in [(2.0, 4.0), (0.5, 0.25)]:  # n - dim V = 2
        ratio = orbit_measure_scaling(ent.spec, a, base, quad_nodes=12)
        assert abs(ratio - want) <= 0.03 * want, f"dim3_diag a={a}: {ratio:.4f}"


def test_criterion_09_phase_space_equivalence():
    """Phase-space admissibility integral vs the Calderon function: 1-D
    affine baseline within 3% at 10 points, 2-D family coarse check within
    8%, Gaussian Wigner closed form within 1e-6; < 10 min."""
    start = time.monotonic()

    # Gaussian closed form
    from tcwavelets.grid import GridFunction
    N, L = 256, 16.0
    xax = (np.arange(N) - N // 2) * (L / N)
    gauss = GridFunction(((2.0 ** 0.25) * np.exp(-np.pi * xax ** 2))
                         .astype(complex), L, "space")
    wf = wigner(gauss)
    X, XI = np.meshgrid(wf.axis_points_x(), wf.axis_points_xi(), indexing="ij")
    exact = 2.0 * np.exp(-2.0 * np.pi * (X ** 2 + XI ** 2))
    assert np.abs(wf.data - exact).max() < 1e-6

    # 1-D affine baseline, 10 test points
    entry = get_entry("affine_1d")
    psihat = frequency_bump(1, 256, 16.0, center=[2.0], width=0.5)
    quad = default_quadrature(entry.spec, band_center=np.zeros(0),
                              band_halfwidth=3.0, t_box=[[-3.0, 2.0]],
                              n_u=8, n_t=64)
    rng = np.random.default_rng(7)
    pts = [(rng.uniform(-0.8, 0.8, 1), rng.uniform(1.2, 2.8, 1))
           for _ in range(10)]
    rep = equivalence_check(entry.spec, idft(psihat), pts, quad,
                            wigner_kwargs=dict(b_halfwidth=12.0, n_b=241,
                                               t_box=[[-3.0, 2.0]], n_t=81))
    assert rep["max_rel_deviation"] < 0.03, \
        f"affine deviation {rep['max_rel_deviation']:.4f}"

    # 2-D family, coarse grid
    spec = get_entry("dim2_family:0,1").spec
    psihat2 = frequency_bump(2, 32, 6.0, center=[0.0, 1.5], width=0.5)
    quad2 = default_quadrature(spec, band_center=np.array([0.0]),
                               band_halfwidth=3.0, t_box=[[-2.5, 1.5]],
                               n_u=40, n_t=200)
    pts2 = [(np.array([0.3, -0.2]), np.array([0.3, 1.5])),
            (np.array([-0.4, 0.5]), np.array([-0.5, 1.2]))]
    rep2 = equivalence_check(spec, idft(psihat2), pts2, quad2,
                             wigner_kwargs=dict(b_halfwidth=3.0, n_b=33,
                                                beta_box=[[-4.0, 8.0]],
                                                n_beta=73,
                                                t_box=[[-2.5, 1.5]], n_t=65))
    assert rep2["max_rel_deviation"] < 0.08, \
        f"2-D coarse deviation {rep2['max_rel_deviation']:.4f}"
    elapsed = time.monotonic() - start
    assert elapsed < 600.0, f"took {elapsed:.1f} s"


def test_criterion_10_no_go_checks():
    """Boundary cases: trivial-dilation groups and the unimodularity
    condition of the 3-D diagonal family."""
    # full modulation space, trivial dilations: admissible for any nonzero psi
    spec = get_entry("heisenberg:1").spec
    psihat = frequency_bump(1, 128, 16.0, center=[0.0], width=0.7)
    quad = default_quadrature(spec, band_center=np.array([0.0]),
                              band_halfwidth=5.0, n_u=60)
    rep = admissibility_report(spec, psihat,
                               np.linspace(-1.0, 1.0, 9).reshape(-1, 1), quad)
    assert rep.verdict == "admissible"

    # proper modulation subspace, trivial dilations: Phi bounded between
    # positive constants but not constant -> weakly admissible only
    ent = get_entry("proper_v:2,1")
    psihat2 = frequency_bump(2, 128, 16.0, center=[0.0, 0.0], width=1.0)
    quad2 = default_quadrature(ent.spec, band_center=np.array([0.0]),
                               band_halfwidth=5.0, n_u=60)
    freqs = np.column_stack([np.linspace(-1, 1, 10), np.linspace(-0.3, 0.3, 10)])
    rep2 = admissibility_report(ent.spec, psihat2, freqs, quad2)
    assert rep2.verdict == "weakly-admissible"
    assert ent.expected["group_admissible"] is False
    # strong admissibility rejected: the orbit-space mass of a transversal
    # box doubles with every doubling of the box, so it diverges
    base = build_transversal(ent, n_points=8)
    for a in (2.0, 4.0):
        ratio = orbit_measure_scaling(ent.spec, a, base)
        assert abs(ratio - a) <= 0.03 * a

    # unimodularity of the 3-D diagonal family with 1-D modulation subspace:
    # numeric modular function matches the closed form to 1e-8, and the
    # recorded condition is beta = -1, not alpha + beta = -1
    comparison = []
    for alpha, beta in [(1.0, 2.0), (1.0, -2.0), (0.5, -1.0), (2.0, -1.0),
                        (1.0, -1.0)]:
        spec3 = get_entry(f"dim3_diag:{alpha},{beta},1").spec
        g = spec3.element(1.0, np.zeros(3), np.zeros(1), np.array([0.7]))
        hw = modular_functions(spec3, g)
        assert abs(hw.delta_g_numeric - hw.delta_g_closed_form) < 1e-8
        comparison.append({
            "alpha": alpha, "beta": beta,
            "delta_g": hw.delta_g_closed_form,
            "unimodular_computed": abs(hw.delta_g_closed_form - 1.0) < 1e-12,
            "condition_beta_eq_minus_one": beta == -1.0,
            "condition_alpha_plus_beta_eq_minus_one": alpha + beta == -1.0,
        })
    for row in comparison:
        assert row["unimodular_computed"] == row["condition_beta_eq_minus_one"]
    # the sum condition disagrees at (1, -2): recorded, not asserted
    disagrees = [r for r in comparison
                 if r["condition_alpha_plus_beta_eq_minus_one"]
                 != r["unimodular_computed"]]
    assert disagrees, "expected at least one parameter pair separating the conditions"
