"""MIMO-STCA mainlobe deceptive-jamming suppression toolkit.

Space-time coding on transmit spreads each scatterer's signature over a
range-dependent transmit spatial frequency, which is what lets the
receiver separate a repeater's delayed copies from the true target even
when everything shares one direction of arrival.  The package simulates
that array, selects uncontaminated training data, estimates the jamming
subspace, and builds either a purely adaptive filter or a robust
composite of a shaped transmit pattern and the adaptive stage.

Modules, pipeline order: params -> steering -> waveform -> scene ->
covariance -> sampling -> suppression / pattern_control -> metrics ->
config / experiment -> cli.
"""

from .config import (ALIGNED_TOML, DEFAULT_TOML, ConfigError, MainlobeOptions,
                     NullOptions, ScenarioConfig, SolverOptions, SweepOptions,
                     aligned_config, default_config, load_config, parse_config)
from .covariance import (CovarianceMatrix, EigenSplit, analytic_covariance,
                         dominant_count, eig_descending, sample_covariance,
                         split_subspaces)
from .experiment import (DetectionTrial, SinrPoint, SuppressionRun,
                         detection_success_rate, estimate_clean_incm,
                         presumed_target_steering, robustness_comparison,
                         run_detection_trials, run_sinr_sweep, run_suppression,
                         training_rows, true_interference_covariance,
                         write_detection_csv, write_pattern_csv,
                         write_profile_csv, write_sinr_csv)
from .metrics import (SINR_FLOOR_DB, PatternGrid, capon_2d, mvdr_weight,
                      pattern_2d, relative_response_db, sinr_db)
from .params import SPEED_OF_LIGHT, RadarParams
from .pattern_control import (ControlRegion, ControlState, mainlobe_region,
                              mrbc_iterate, normalized_response, null_region,
                              region_deviations, rjns_weight,
                              robust_null_regions, select_control_points,
                              shape_transmit_weight, single_point_correction,
                              subdivide_regions)
from .sampling import (CorrelationReport, DetectionThresholds, NhssResult,
                       SampleSegments, Segment, best_correlation, locate_target,
                       segment_echo)
from .scene import (DataCube, ErrorInjection, FalseTargetSpec, SceneComponent,
                    SceneError, TargetSpec, synthesize_cube)
from .steering import (SpatialFrequencies, receive_steering,
                       spatial_frequencies, transmit_steering,
                       uniform_phase_vector, virtual_from_frequencies,
                       virtual_steering, wrap_frequency)
from .suppression import (BeamWeight, DegenerateGeometryError, apply_weight,
                          nsjm_weight, output_profile_db, unit_gain)
from .waveform import chirp_samples, validate_matched_filter

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
