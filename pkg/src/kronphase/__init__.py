"""Eigenphase statistics of tensor products of random unitary matrices.

The package samples Haar-distributed unitaries, forms the phases of
their tensor products, rescales to unit intensity, and compares pair
correlations, nearest-neighbor spacings, and interval counts against
the analytic sine-kernel, superposition, and Poisson predictions.
"""

__version__ = "0.1.0"

from .errors import CapacityError
from .kernels import (
    cue_s,
    hadamard_bound,
    reduce_to_pi,
    rho_cue,
    rho_poisson,
    rho_sine,
    sine_q,
)
from .combinatorics import (
    PartitionFamily,
    SetPartition,
    bell_number,
    falling_factorial,
    rho_superposed_pair,
    rho_superposed_sine,
    set_partitions,
    stirling2_row,
    stirling_identity_residual,
)
from .sampler import RngStream, eigenphases, sample_cue_phases, sample_haar_unitary
from .processes import (
    RescaledConfig,
    WindowSpec,
    reduce_phases,
    rescale_center,
    tensor_phases,
    triple_tensor,
    window,
)
from .estimators import (
    CorrelationHistogram,
    EstimateBundle,
    SpacingHistogram,
    circular_gaps,
    count_variance,
    estimate_intensity,
    estimate_pair_correlation,
    estimate_triple_correlation,
    interval_counts,
    merge,
    nearest_neighbor_spacings,
)
from .gof import (
    CurveComparison,
    KsResult,
    chi_square_uniformity,
    compare_to_curve,
    ks_against_exponential,
)
from .config import ExperimentConfig, build_config, parse_config_file
from .runner import (
    RunManifest,
    emit_reference_curve,
    run_convergence_sweep,
    run_experiment,
    sample_rescaled_config,
    target_curve,
)
from .acceptance import CriterionResult, run_criteria

__all__ = [
    "CapacityError",
    "CorrelationHistogram",
    "CriterionResult",
    "CurveComparison",
    "EstimateBundle",
    "ExperimentConfig",
    "KsResult",
    "PartitionFamily",
    "RescaledConfig",
    "RngStream",
    "RunManifest",
    "SetPartition",
    "SpacingHistogram",
    "WindowSpec",
    "bell_number",
    "build_config",
    "chi_square_uniformity",
    "circular_gaps",
    "compare_to_curve",
    "count_variance",
    "cue_s",
    "eigenphases",
    "emit_reference_curve",
    "estimate_intensity",
    "estimate_pair_correlation",
    "estimate_triple_correlation",
    "falling_factorial",
    "hadamard_bound",
    "interval_counts",
    "ks_against_exponential",
    "merge",
    "nearest_neighbor_spacings",
    "parse_config_file",
    "reduce_phases",
    "reduce_to_pi",
    "rescale_center",
    "rho_cue",
    "rho_poisson",
    "rho_sine",
    "rho_superposed_pair",
    "rho_superposed_sine",
    "run_convergence_sweep",
    "run_criteria",
    "run_experiment",
    "sample_cue_phases",
    "sample_haar_unitary",
    "sample_rescaled_config",
    "set_partitions",
    "sine_q",
    "stirling2_row",
    "stirling_identity_residual",
    "target_curve",
    "tensor_phases",
    "triple_tensor",
    "window",
    "__version__",
]
