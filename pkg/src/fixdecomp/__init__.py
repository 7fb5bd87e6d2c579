"""Fixpoint filter-bank image decomposition.

Spectral convolution algebra on periodic grids, an augmented-Lagrangian
sweep solver with residual diagnostics, closed-form filter triples with
factorization checkers, a spline-Riesz multiscale bank, and an experiment
harness for denoising and cartoon-texture runs.
"""

from .errors import (
    CPCViolationError,
    CorruptHeaderError,
    DegenerateShapeError,
    EmptyBracketError,
    FamilySizeMismatchError,
    FixdecompError,
    InvalidMaskError,
    InvalidParameterError,
    NonPositiveCorrectionError,
    NonPositiveThresholdError,
    NotStronglyFactoringError,
    NotWeaklyFactoringError,
    OverflowGuardError,
    RealCastError,
    ShapeMismatchError,
    SingularRefinementError,
    UnsupportedFormatError,
)
from .filterbanks import (
    ConditionReport,
    build_model2,
    build_model3,
    build_tv_hilbert,
    build_tv_l2,
    gradient_bank,
    omega_grid,
    sigma_spectrum,
    strong_factor,
    weak_factor,
)
from .grids import (
    convolve,
    convolve_adjoint,
    dft2,
    diag_family_convolve,
    family_adjoint,
    family_convolve,
    frobenius,
    idft2,
    inner,
    kernel_symbol,
    l1_aniso,
    l1_iso,
    periodic_get,
    real_cast,
)
from .shrinkage import shrink, shrink_aniso, shrink_iso
from .solver import (
    DecompositionResult,
    DiagnosticsReport,
    InputFilterTriple,
    SolverConfig,
    SolverState,
    affine_residual,
    energy_hilbert,
    energy_var,
    init_state,
    iterate,
    residuals,
    solve,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
