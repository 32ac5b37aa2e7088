"""Spectral projection toolkit for decay rates of damped wave-type systems.

The package approximates the spectrum of a damped evolution generator by
projecting onto eigenfunctions of the undamped part, then estimates the best
exponential decay rate from the retained part of the computed spectrum. It
ships four model problems (1-D and 2-D waves, a clamped beam, a damped free
Schrodinger equation), piecewise-constant damping families, quantitative
hypothesis diagnostics, parameter sweeps, and a comparison against uniform
finite element dispersion.
"""

from .abscissa import (
    AbscissaReport,
    AsymptoteEstimate,
    HypothesisReport,
    check_hypotheses,
    compute_spectrum,
    estimate_N1,
    estimate_r,
    modified_abscissa,
    run_algorithm,
    signed_indices,
)
from .analysis import (
    SweepResult,
    fem_dispersion_error,
    fem_eigenvalue,
    fem_required_elements,
    fem_table,
    fem_to_csv,
    projection_vs_fem_table,
    sweep,
    sweep_to_csv,
)
from .assembly import ProjectedSystem, assemble, dump_matrix, realize_matrix
from .damping import (
    DampingProfile,
    QuadratureConvergenceError,
    build_family,
    build_profile,
    family_names,
    overlap,
    overlap_block,
    overlap_gram,
    overlap_quadrature,
    profile_from_boxes,
)
from .eig import (
    EigenSolverError,
    Spectrum,
    eigen_complex,
    eigen_real,
    match_spectra,
    order_spectrum,
)
from .operators import ModalModel, enumerate_modes, get_model, model_names

__version__ = "0.1.0"

__all__ = [
    "AbscissaReport",
    "AsymptoteEstimate",
    "DampingProfile",
    "EigenSolverError",
    "HypothesisReport",
    "ModalModel",
    "ProjectedSystem",
    "QuadratureConvergenceError",
    "Spectrum",
    "SweepResult",
    "__version__",
    "assemble",
    "build_family",
    "build_profile",
    "check_hypotheses",
    "compute_spectrum",
    "dump_matrix",
    "eigen_complex",
    "eigen_real",
    "enumerate_modes",
    "estimate_N1",
    "estimate_r",
    "family_names",
    "fem_dispersion_error",
    "fem_eigenvalue",
    "fem_required_elements",
    "fem_table",
    "fem_to_csv",
    "get_model",
    "match_spectra",
    "model_names",
    "modified_abscissa",
    "order_spectrum",
    "overlap",
    "overlap_block",
    "overlap_gram",
    "overlap_quadrature",
    "profile_from_boxes",
    "projection_vs_fem_table",
    "realize_matrix",
    "run_algorithm",
    "signed_indices",
    "sweep",
    "sweep_to_csv",
]
