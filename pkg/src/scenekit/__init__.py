"""Scene representation and evaluation toolkit for vehicle trajectory
prediction: neutral scene files, Bezier lane compression, text prompts,
agent-centric rasters, cover-set modes, kinematic baselines, and metrics.
"""

__version__ = "0.1.0"

from .bezier import CubicBezier, chord_length_params, evaluate, fit_error, fit_lane
from .coverset import (CoverReport, TrajectorySet, delta, delta_matrix,
                       greedy_cover, greedy_cover_indices, is_cover,
                       load_coverset, save_coverset)
from .errors import (DegenerateInputError, InvalidInputError,
                     ReconciliationError, SceneKitError, UndefinedRateError)
from .estimators import (GreedyCoverSet, KinematicPredictor, NearestModeOracle,
                         PhysicsOraclePredictor, PromptTransformer,
                         RasterTransformer)
from .geometry import (Pose, normalize_angle, resample_polyline,
                       transform_from_agent_frame, transform_to_agent_frame)
from .metrics import (MetricsReport, evaluate_pairs, evaluate_predictions,
                      is_miss, min_ade_k, min_fde_k, miss_rate_k)
from .predictors import (KinematicModelKind, ModeScores, average_displacement,
                         physics_oracle, rollout, score_modes_nearest_oracle,
                         score_modes_physics)
from .prompts import (PromptConfig, RenderedPrompt, fmt_number, render_prompt,
                      render_text)
from .raster import (RasterConfig, RasterImage, render, target_centroid_pixel,
                     world_to_pixel)
from .scene import (AGENT_FRAME_POSE, AgentState, Lane, MapLayers, OrientedBox,
                    PredictionInstance, Trajectory, instance_to_record,
                    load_split, record_to_instance, save_split,
                    validate_split_records)
from .tokenization import (HeuristicTokenCounter, TokenCounter,
                           WordPieceTokenCounter, count_tokens,
                           default_token_counter, truncate)

__all__ = [name for name in dir() if not name.startswith("_")]
