"""Shared fixtures: the reference 2-D group, its normalized wavelet, and the
band-limited signals used by the transform tests.

The heavier session fixtures are built lazily so the cheap unit tests stay
fast when run alone.
"""

import numpy as np
import pytest

from tcwavelets.admissibility import default_quadrature, normalize_admissible
from tcwavelets.catalog import get_entry
from tcwavelets.grid import frequency_bump


# Reference discretization: resolves the wavelet band at (0, 2.1) and leaves
# enough Nyquist headroom for the dilation range used in the transform tests.
REF_N = 128
REF_L = 16.0
BAND_CENTER = np.array([0.0, 2.1])
BAND_WIDTH = 0.7


@pytest.fixture(scope="session")
def dim2_entry():
    return get_entry("dim2_family:0,1")


@pytest.fixture(scope="session")
def dim2_spec(dim2_entry):
    return dim2_entry.spec


@pytest.fixture(scope="session")
def dim2_quad(dim2_spec):
    return default_quadrature(dim2_spec, band_center=BAND_CENTER[:1],
                              band_halfwidth=4.0, t_box=[[-4.0, 4.5]],
                              n_u=40, n_t=200)


@pytest.fixture(scope="session")
def seed_wavelet():
    return frequency_bump(2, REF_N, REF_L, center=BAND_CENTER, width=BAND_WIDTH)


@pytest.fixture(scope="session")
def normalized_wavelet(dim2_spec, dim2_quad, seed_wavelet):
    return normalize_admissible(dim2_spec, seed_wavelet, dim2_quad)
