"""Spectral solver and regularized backward reconstruction for
time-fractional diffusion on a box, with the special functions,
quadrature, and experiment drivers that support it."""

from .errors import DomainError, NumericalError, ParameterChoiceError
from .experiments import (
    ErrorTable,
    ExperimentConfig,
    FitResult,
    NoiseAudit,
    NoiseMode,
    PaperProblem,
    emit_csv,
    emit_plot_script,
    emit_surface,
    fit_rate,
    noise_audit,
    noisy_data,
    noisy_source,
    paper_problem,
    run_fig4,
    run_table1,
    run_table2,
    run_table3,
)
from .quadrature import (
    QuadConfig,
    QuadRule,
    SingularMode,
    composite_nodes,
    gauss_legendre,
    integrate_1d,
    integrate_2d,
    integrate_singular,
    singular_nodes,
)
from .solver import (
    ChoiceRule,
    CompositeSource,
    PointwiseSource,
    RegularizationChoice,
    SeparableSource,
    SolvabilityReport,
    Source,
    SpectralSource,
    TimeFractionalProblem,
    ZeroSource,
    amplification_factor,
    backward_reconstruct,
    choose_t,
    final_value,
    forward_solve,
    memory_term,
    reconstruct_noisy,
    solvability_diagnostic,
    source_coefficient,
)
from .special import MLQuery, gamma_fn, ml, ml_array, mittag_leffler
from .spectral import (
    Mode,
    ModeSet,
    SpectralField,
    eigenfunction_eval,
    hp_norm,
    l2_error,
    l2_norm,
    project,
    read_csv,
    synthesize,
    synthesize_grid,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ChoiceRule",
    "CompositeSource",
    "DomainError",
    "ErrorTable",
    "ExperimentConfig",
    "FitResult",
    "MLQuery",
    "Mode",
    "ModeSet",
    "NoiseAudit",
    "NoiseMode",
    "NumericalError",
    "PaperProblem",
    "ParameterChoiceError",
    "PointwiseSource",
    "QuadConfig",
    "QuadRule",
    "RegularizationChoice",
    "SeparableSource",
    "SingularMode",
    "SolvabilityReport",
    "Source",
    "SpectralField",
    "SpectralSource",
    "TimeFractionalProblem",
    "ZeroSource",
    "amplification_factor",
    "backward_reconstruct",
    "choose_t",
    "composite_nodes",
    "emit_csv",
    "emit_plot_script",
    "emit_surface",
    "eigenfunction_eval",
    "final_value",
    "fit_rate",
    "forward_solve",
    "gamma_fn",
    "gauss_legendre",
    "hp_norm",
    "integrate_1d",
    "integrate_2d",
    "integrate_singular",
    "l2_error",
    "l2_norm",
    "memory_term",
    "ml",
    "ml_array",
    "mittag_leffler",
    "noise_audit",
    "noisy_data",
    "noisy_source",
    "paper_problem",
    "project",
    "read_csv",
    "reconstruct_noisy",
    "run_fig4",
    "run_table1",
    "run_table2",
    "run_table3",
    "singular_nodes",
    "solvability_diagnostic",
    "source_coefficient",
    "synthesize",
    "synthesize_grid",
    "write_csv",
    "__version__",
]
