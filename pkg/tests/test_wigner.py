"""Wigner distribution: closed form, structural invariants, equivalence."""

import numpy as np
import pytest

from tcwavelets.admissibility import default_quadrature
from tcwavelets.catalog import get_entry
from tcwavelets.grid import GridFunction, dft, frequency_bump, gaussian, idft
from tcwavelets.wigner import (
    WignerField,
    equivalence_check,
    wigner,
    wigner_admissibility_integral,
)


def _unit_gaussian(N=256, L=16.0):
    x = (np.arange(N) - N // 2) * (L / N)
    data = (2.0 ** 0.25) * np.exp(-np.pi * x ** 2)
    return GridFunction(data.astype(complex), L, "space")


def test_gaussian_closed_form():
    """W of 2^{1/4} e^{-pi y^2} is 2 e^{-2 pi (x^2 + xi^2)}."""
    wf = wigner(_unit_gaussian())
    X, XI = np.meshgrid(wf.axis_points_x(), wf.axis_points_xi(), indexing="ij")
    exact = 2.0 * np.exp(-2.0 * np.pi * (X ** 2 + XI ** 2))
    assert np.abs(wf.data - exact).max() < 1e-6


def test_marginals():
    psi = _unit_gaussian()
    wf = wigner(psi)
    np.testing.assert_allclose(wf.marginal_x(), np.abs(psi.data) ** 2,
                               atol=1e-12)
    np.testing.assert_allclose(wf.marginal_xi(), np.abs(dft(psi).data) ** 2,
                               atol=1e-12)
    assert abs(wf.total_mass() - psi.norm_sq()) < 1e-10


def test_wigner_of_complex_signal_is_real():
    psihat = frequency_bump(1, 128, 16.0, center=[1.5], width=0.6)
    wf = wigner(idft(psihat))
    assert wf.data.dtype.kind == "f"
    # concentrated near the band frequency
    peak = np.unravel_index(np.argmax(wf.data), wf.data.shape)
    assert abs(wf.axis_points_xi()[peak[1]] - 1.5) < 0.2


def test_translation_covariance():
    """W of T_a psi is W shifted by a in x."""
    N, L = 128, 16.0
    psi = gaussian(1, N, L, center=[0.0], width=0.8)
    shifted = gaussian(1, N, L, center=[1.0], width=0.8)
    w0 = wigner(psi)
    w1 = wigner(shifted)
    steps = int(round(1.0 / (L / N)))
    np.testing.assert_allclose(np.roll(w0.data, steps, axis=0), w1.data,
                               atol=1e-9)


def test_dimension_limit():
    with pytest.raises(ValueError):
        wigner(GridFunction(np.zeros((8, 8, 8)), 4.0, "space"))


def test_memory_guard():
    with pytest.raises(MemoryError):
        wigner(GridFunction(np.zeros((512, 512)), 4.0, "space"),
               max_bytes=10 ** 6)


def test_affine_equivalence():
    """Phase-space admissibility integral vs Calderon function on the 1-D
    wavelet group, two independent pipelines."""
    entry = get_entry("affine_1d")
    psihat = frequency_bump(1, 256, 16.0, center=[2.0], width=0.5)
    quad = default_quadrature(entry.spec, band_center=np.zeros(0),
                              band_halfwidth=3.0, t_box=[[-3.0, 2.0]],
                              n_u=8, n_t=64)
    pts = [(np.array([0.3]), np.array([2.0])),
           (np.array([-0.5]), np.array([1.5]))]
    rep = equivalence_check(entry.spec, idft(psihat), pts, quad,
                            wigner_kwargs=dict(b_halfwidth=12.0, n_b=241,
                                               t_box=[[-3.0, 2.0]], n_t=81))
    assert rep["max_rel_deviation"] < 0.03


def test_integral_zero_far_from_support():
    entry = get_entry("affine_1d")
    psihat = frequency_bump(1, 128, 16.0, center=[2.0], width=0.4)
    wf = wigner(idft(psihat))
    val = wigner_admissibility_integral(
        entry.spec, wf, (np.array([0.0]), np.array([-2.0])),
        b_halfwidth=8.0, n_b=81, t_box=[[-2.0, 1.5]], n_t=41)
    on_orbit = wigner_admissibility_integral(
        entry.spec, wf, (np.array([0.0]), np.array([2.0])),
        b_halfwidth=8.0, n_b=81, t_box=[[-2.0, 1.5]], n_t=41)
    assert abs(val) < 1e-3 * abs(on_orbit)
