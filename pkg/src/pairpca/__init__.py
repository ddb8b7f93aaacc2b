"""Signal-subspace recovery from positive pairs.

Alignment-only contrastive PCA, its hard-uniformity variant solved through a
truncated symmetric-definite generalized eigenproblem, baseline methods,
closed-form high-dimensional error predictors, and a seeded Monte-Carlo
benchmark harness with a CSV/figure report path.
"""

from .errors import (
    ConfigError,
    DegenerateCovariance,
    InvalidInput,
    InvalidSpec,
    InvalidTruncation,
    PairPCAError,
)
from .factor_model import (
    FactorModelSpec,
    Loadings,
    PairedDataset,
    build_loadings,
    generate,
    population_covariance,
    sample_pairs,
)
from .linalg import (
    EigenDecomposition,
    GeneralizedEigenResult,
    SymmetricMatrix,
    generalized_eig,
    sym_eig,
    truncate_rank,
)
from .estimators import (
    CovariancePair,
    SubspaceEstimate,
    cca_top_k,
    contrastive_cov,
    cpca,
    cpca_pp,
    pca,
    pca_from_data,
    pca_plus,
    pca_plus_plus,
    sample_cov,
    synthesize_fg_bg,
)
from .metrics import PrincipalAngleSet, match_to_population, principal_angles, sin_theta_dist
from .theory import (
    bbp_detectable,
    finite_sample_bound_shape,
    fixed_aspect_error,
    growing_spike_error,
    pca_plus_alignment_bound,
)
from .harness import (
    ExperimentConfig,
    MethodSpec,
    ModelTemplate,
    SummaryRow,
    TrialRecord,
    emit_csv,
    emit_summary,
    run_sweep,
    run_trial,
    summarize,
    sweep_points,
)
from .presets import preset, preset_names

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CovariancePair",
    "DegenerateCovariance",
    "EigenDecomposition",
    "ExperimentConfig",
    "FactorModelSpec",
    "GeneralizedEigenResult",
    "InvalidInput",
    "InvalidSpec",
    "InvalidTruncation",
    "Loadings",
    "MethodSpec",
    "ModelTemplate",
    "PairPCAError",
    "PairedDataset",
    "PrincipalAngleSet",
    "SubspaceEstimate",
    "SummaryRow",
    "SymmetricMatrix",
    "TrialRecord",
    "bbp_detectable",
    "build_loadings",
    "cca_top_k",
    "contrastive_cov",
    "cpca",
    "cpca_pp",
    "emit_csv",
    "emit_summary",
    "finite_sample_bound_shape",
    "fixed_aspect_error",
    "generalized_eig",
    "generate",
    "growing_spike_error",
    "match_to_population",
    "pca",
    "pca_from_data",
    "pca_plus",
    "pca_plus_plus",
    "pca_plus_alignment_bound",
    "population_covariance",
    "preset",
    "preset_names",
    "principal_angles",
    "run_sweep",
    "run_trial",
    "sample_cov",
    "sample_pairs",
    "sin_theta_dist",
    "summarize",
    "sweep_points",
    "sym_eig",
    "synthesize_fg_bg",
    "truncate_rank",
]
