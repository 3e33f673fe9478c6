"""Quasi-joint-probability distributions for finite-dimensional quantum systems.

Build operator-valued atoms for product-form mixing schemes (Kirkwood-Dirac,
split and reordered variants, Margenau-Hill, Born-Jordan quadrature),
evaluate complex joint weights of states, verify support and marginals,
reconstruct states by linear inversion, and analyze distinguishability
ranks and degeneracy bounds.
"""

from .analysis import (
    FeasibilityReport,
    RealnessZReport,
    ReconstructionMap,
    SupportReport,
    degeneracy_feasible,
    diag_equality_check,
    equal_spectra_bound,
    is_real,
    nondegenerate_partner_bound,
    realness_z_report,
    reconstruct_state,
    reconstruction_map,
    scheme_is_real,
    verify_support,
)
from .distributions import (
    Factor,
    OperatorAtomSet,
    QuasiDistribution,
    SchemeSpec,
    WignerScheme,
    born_distribution,
    build_atoms,
    characteristic_function,
    evaluate_distribution,
    marginal,
    max_weight_deviation,
    quantize,
    quasi_expectation,
    scheme_alternating,
    scheme_born_jordan,
    scheme_kirkwood,
    scheme_margenau_hill,
    scheme_s_alpha,
    wigner_density_estimate,
)
from .linalg import (
    EigenSystem,
    eigensystem,
    matrices_close,
    matrix_exponential_unitary,
    real_rank_and_pinv,
)
from .quantum import (
    DensityState,
    HermitianObservable,
    SpinTriple,
    bloch_state,
    embed,
    expectation,
    parametrize,
    random_density,
    random_hermitian,
    spin_operators,
)

__version__ = "0.1.0"

__all__ = [
    "DensityState",
    "EigenSystem",
    "Factor",
    "FeasibilityReport",
    "HermitianObservable",
    "OperatorAtomSet",
    "QuasiDistribution",
    "RealnessZReport",
    "ReconstructionMap",
    "SchemeSpec",
    "SpinTriple",
    "SupportReport",
    "WignerScheme",
    "bloch_state",
    "born_distribution",
    "build_atoms",
    "characteristic_function",
    "degeneracy_feasible",
    "diag_equality_check",
    "eigensystem",
    "embed",
    "equal_spectra_bound",
    "evaluate_distribution",
    "expectation",
    "is_real",
    "marginal",
    "matrices_close",
    "matrix_exponential_unitary",
    "max_weight_deviation",
    "nondegenerate_partner_bound",
    "parametrize",
    "quantize",
    "quasi_expectation",
    "random_density",
    "random_hermitian",
    "real_rank_and_pinv",
    "realness_z_report",
    "reconstruct_state",
    "reconstruction_map",
    "scheme_alternating",
    "scheme_born_jordan",
    "scheme_is_real",
    "scheme_kirkwood",
    "scheme_margenau_hill",
    "scheme_s_alpha",
    "spin_operators",
    "verify_support",
    "wigner_density_estimate",
]
