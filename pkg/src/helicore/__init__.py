"""helicore: pseudo-spectral curl calculus on the flat 3-torus.

Exact divergence-free vector fields, the curl eigenbasis, the indefinite
pairing (X, curl_inv Y) with its invariance identities, ideal Euler
dynamics with conserved energy and helicity, sectional curvatures of the
volume-preserving diffeomorphism group, and signed eta sums over the curl
spectrum.
"""

from .curvature import (
    RightInvariantCurvatureTerms,
    biinvariant_connection,
    biinvariant_curvature,
    orthonormalize_pair,
    rightinv_curvature_terms,
    sectional_biinvariant_both,
    sectional_curvature_biinvariant,
    sectional_curvature_eigenpair,
    sectional_curvature_rightinv,
)
from .dynamics import (
    DiagnosticsRow,
    DiagnosticsSeries,
    EvolveConfig,
    beltrami_check,
    euler_rhs,
    evolve,
    stationarity_residual,
    step_rk4,
)
from .errors import BlowUpError, ConfigError, DomainError, SnapshotFormatError
from .fields import (
    HelicalCoefficients,
    SpectralVectorField,
    abc_field,
    ensure_divergence_free,
    ensure_exact,
    field_from_samples,
    helical_basis,
    helical_decompose,
    helical_mode,
    hodge_decompose,
    leray_project,
    random_exact_field,
    zero_field,
)
from .forms import (
    EtaReport,
    ad_invariance_residual,
    biinvariant_form,
    energy,
    eta_partial,
    helicity,
    l2_inner,
    l2_norm,
    transport_invariance_residual,
    two_form_pairing,
)
from .grid import (
    VOLUME,
    GridSpec,
    WaveVector,
    dealias,
    enumerate_wavevectors,
    reverse_modes,
    transform_forward,
    transform_inverse,
)
from .io import (
    RunConfig,
    read_diagnostics_csv,
    read_snapshot,
    write_diagnostics_csv,
    write_snapshot,
)
from .operators import (
    advective_commutator,
    advective_derivative,
    bracket_route_residual,
    cross,
    curl,
    curl_inv,
    divergence,
    gradient,
    inverse_curl_bracket_residual,
    jacobi_residual,
    lie_bracket,
    pointwise_dot,
    projected_advection_residuals,
    projected_cross_skew_residual,
    relative_difference,
    vector_identity_residuals,
)

__version__ = "0.1.0"
