"""Admissibility analysis and generalized wavelet transforms for translation
complete subgroups of the affine Weyl-Heisenberg group."""

from .group import (
    TranslationCompleteGroupSpec,
    GroupElement,
    GroupSpecError,
    HaarWeights,
    dilation_matrix,
    restricted_block,
    det_restricted,
    check_translation_complete,
    multiply,
    inverse,
    haar_density,
    delta_g_closed_form,
    delta_g_numeric,
    modular_functions,
    is_unimodular,
    spec_from_json,
)
from .grid import (
    GridFunction,
    SpectrumSampler,
    dft,
    idft,
    apply_pi,
    apply_pi_fourier,
    project_to_support,
    gaussian,
    frequency_bump,
)
from .dual import (
    act,
    is_orbit_open,
    solve_reach,
    stabilizer_scan,
    classify_orbits,
    OrbitReport,
    orbit_report,
    orbit_measure_scaling,
)
from .admissibility import (
    QuadratureScheme,
    default_quadrature,
    phi_psi,
    phi_psi_many,
    AdmissibilityReport,
    admissibility_report,
    normalize_admissible,
    weight_Psi,
    weighted_norm_check,
)
from .transform import (
    CoefficientField,
    group_grid,
    analyze,
    synthesize,
    single_coefficient,
    coefficient_norm_sq,
    field_inner_product,
)
from .wigner import WignerField, wigner, wigner_admissibility_integral, equivalence_check
from .catalog import CatalogEntry, entry_ids, get_entry
from .interp import gather, BACKEND as INTERP_BACKEND

__version__ = "0.1.0"
