"""Multi-kernel RBF networks with fixed, adaptive, and per-kernel local-weight
fusion, trained by per-sample gradient descent, plus benchmark tasks and
metrics."""

from .centers import (
    SubtractiveConfig,
    fixed_centers,
    grid_axes,
    grid_centers,
    subtractive_clustering,
)
from .errors import (
    CorbfError,
    DataFormatError,
    DimensionMismatchError,
    DivergenceError,
    EmptyInputError,
    InvalidConfigError,
    InvalidModelError,
    MissingArtifactsError,
    PartitionError,
)
from .kernels import (
    KERNEL_NAMES,
    CosineParams,
    GaussianParams,
    KernelBank,
    cosine_kernel,
    gaussian_kernel,
    kernel_matrix,
    kernel_vector,
)
from .metrics import (
    ConfusionCounts,
    ErrorSurface,
    accuracy,
    confusion,
    error_surface,
    format_percent,
    format_youden,
    mse_db,
    mse_db_from_linear,
    sensitivity_specificity_youden,
    write_metric_table,
)
from .model import (
    AdaptiveFusion,
    CoFusion,
    FixedFusion,
    FusionMode,
    MultiHeadRbfModel,
    RbfModel,
    Scenario4Center,
    center_contributions,
    discriminative_power,
    forward,
    forward_batch,
    load_model,
    multiclass_decision,
    save_model,
)
from .tasks import (
    DEFAULT_FUNAPPROX_TARGET,
    LabeledDataset,
    SysIdSignal,
    funapprox_target,
    gen_function_approx,
    gen_sysid,
    load_iris,
    plant_response,
    square_wave,
)
from .trainer import (
    DIVERGENCE_LIMIT,
    RunAggregate,
    TrainConfig,
    TrainTrace,
    fit,
    learning_rate_bound,
    multi_seed_run,
    read_trace_csv,
    sgd_step,
    write_trace_csv,
)

__version__ = "0.1.0"

# bench reads __version__ for its manifests, so it must import after the
# assignment above.
from . import reference  # noqa: E402
from .bench import (  # noqa: E402
    ARCHITECTURES,
    TASKS,
    ExperimentConfig,
    bound_probe,
    compare_report,
    config_from_manifest,
    run_experiment,
)

__all__ = [
    "ARCHITECTURES",
    "ExperimentConfig",
    "TASKS",
    "bound_probe",
    "compare_report",
    "config_from_manifest",
    "reference",
    "run_experiment",
    "AdaptiveFusion",
    "CoFusion",
    "ConfusionCounts",
    "CorbfError",
    "CosineParams",
    "DataFormatError",
    "DEFAULT_FUNAPPROX_TARGET",
    "DimensionMismatchError",
    "DIVERGENCE_LIMIT",
    "DivergenceError",
    "EmptyInputError",
    "ErrorSurface",
    "FixedFusion",
    "FusionMode",
    "GaussianParams",
    "InvalidConfigError",
    "InvalidModelError",
    "KERNEL_NAMES",
    "KernelBank",
    "LabeledDataset",
    "MissingArtifactsError",
    "MultiHeadRbfModel",
    "PartitionError",
    "RbfModel",
    "RunAggregate",
    "Scenario4Center",
    "SubtractiveConfig",
    "SysIdSignal",
    "TrainConfig",
    "TrainTrace",
    "accuracy",
    "center_contributions",
    "confusion",
    "cosine_kernel",
    "discriminative_power",
    "error_surface",
    "fit",
    "fixed_centers",
    "format_percent",
    "format_youden",
    "forward",
    "forward_batch",
    "funapprox_target",
    "gaussian_kernel",
    "gen_function_approx",
    "gen_sysid",
    "grid_axes",
    "grid_centers",
    "kernel_matrix",
    "kernel_vector",
    "learning_rate_bound",
    "load_iris",
    "load_model",
    "mse_db",
    "mse_db_from_linear",
    "multi_seed_run",
    "multiclass_decision",
    "plant_response",
    "read_trace_csv",
    "save_model",
    "sensitivity_specificity_youden",
    "sgd_step",
    "square_wave",
    "subtractive_clustering",
    "write_metric_table",
    "write_trace_csv",
    "__version__",
]
