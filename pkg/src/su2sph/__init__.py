"""Invariant vectors and spherical functions on products of SU(2).

The package constructs the diagonally invariant vectors of tensor products
of SU(2) representations, evaluates spherical functions both by direct
tensor algebra and through closed-form generating functions, and verifies
the geometric and measure-theoretic identities tying the two together
(spectral coordinates, pushforward of Haar measure, orthogonality,
determinant and Pfaffian identities).
"""

from .invariants import (
    ExponentMatrix,
    ExponentTriple,
    check_k_invariance,
    exponent_matrix,
    exponents_from_degrees,
    row_degrees,
    xi_general,
    xi_three,
)
from .polyfock import (
    EXACT,
    FLOAT,
    CoefficientMode,
    Polynomial,
    RationalComplex,
    fock_inner,
    homogeneous_degrees,
    mono_norm_sq,
    poly_add,
    poly_allclose,
    poly_mul,
    poly_pow,
    poly_sub,
    substitute_blocks,
)
from .series import (
    PolyMatrix,
    TruncatedSeries,
    det_series,
    pfaffian,
    poly_det,
    series_add,
    series_inv_sqrt,
    series_mul,
)
from .spectral import (
    DeltaSection,
    MomentReport,
    SpectralCoords,
    delta_contains,
    delta_section,
    delta_uniform_sample,
    gram_det,
    l2_inner_delta,
    pushforward_report,
    schur_gram_report,
    spectral_coords,
    triple_from_coords,
)
from .spherical import (
    SphericalValue,
    SymmetricContraction,
    gaussian_inner,
    gaussian_vector_series,
    genfun_general,
    genfun_three,
    norm_xi,
    pair_order,
    spherical_general,
    spherical_three,
    verify_prop42,
)
from .suites import SUITES, run_all, run_suite
from .su2 import (
    CanonicalTriple,
    SU2Element,
    haar_sample,
    reduce_canonical,
    rep_apply,
    su2_inv,
    su2_mul,
    su2_new,
    su2_rational,
)

__version__ = "0.1.0"
