"""Estimator-style wrappers over the functional core.

These follow the scikit-learn conventions (constructor params stored
verbatim, ``fit`` returning self, trailing-underscore fitted attributes,
``get_params``/``set_params`` via BaseEstimator) so the toolkit composes with
that ecosystem's tooling.  ``GreedyCoverSet`` deliberately mirrors KMeans:
``fit`` learns the modes, ``transform`` yields distances to them, ``predict``
the nearest mode index.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .coverset import _as_stack, delta_matrix, greedy_cover_indices
from .errors import InvalidInputError
from .predictors import KinematicModelKind, physics_oracle, rollout
from .prompts import PromptConfig, RenderedPrompt, render_prompt
from .raster import RasterConfig, render
from .scene import HORIZON_S, SAMPLE_RATE_HZ, PredictionInstance
from .tokenization import TokenCounter


def _instance_list(X: Any) -> list[PredictionInstance]:
    instances = list(X)
    for inst in instances:
        if not isinstance(inst, PredictionInstance):
            raise InvalidInputError(f"expected PredictionInstance, got {type(inst).__name__}")
    return instances


class GreedyCoverSet(BaseEstimator, TransformerMixin):
    """Greedy epsilon-cover over a base set of trajectories.

    Parameters
    ----------
    epsilon : float
        Coverage radius in meters (strict: covered means distance < epsilon).

    Attributes
    ----------
    trajectories_ : ndarray of shape (cover_size, T, 2)
        Selected modes in pick order.
    indices_ : ndarray of shape (cover_size,)
        Positions of the modes within the fitted base set.
    cover_size_ : int
    """

    def __init__(self, epsilon: float = 2.0):
        self.epsilon = epsilon

    def fit(self, X: Any, y: Any = None) -> "GreedyCoverSet":
        base = _as_stack(X)
        indices = greedy_cover_indices(base, self.epsilon)
        self.indices_ = np.asarray(indices, dtype=int)
        self.trajectories_ = base[self.indices_] if indices else base[:0]
        self.cover_size_ = len(indices)
        return self

    def transform(self, X: Any) -> np.ndarray:
        """Distance of each trajectory in X to each fitted mode."""
        check_is_fitted(self, "trajectories_")
        return delta_matrix(X, self.trajectories_)

    def predict(self, X: Any) -> np.ndarray:
        """Index of the nearest fitted mode for each trajectory in X."""
        return self.transform(X).argmin(axis=1)


class PromptTransformer(BaseEstimator, TransformerMixin):
    """Render instances to text prompts; stateless, fit is a no-op."""

    def __init__(self, variant: str = "bezier", max_tokens: int = 512,
                 discretization_spacing: float = 1.0,
                 counter: TokenCounter | None = None):
        self.variant = variant
        self.max_tokens = max_tokens
        self.discretization_spacing = discretization_spacing
        self.counter = counter

    def fit(self, X: Any = None, y: Any = None) -> "PromptTransformer":
        return self

    def transform(self, X: Iterable[PredictionInstance]) -> list[RenderedPrompt]:
        config = PromptConfig(self.variant, self.max_tokens, self.discretization_spacing)
        return [render_prompt(inst, config, self.counter) for inst in _instance_list(X)]


class RasterTransformer(BaseEstimator, TransformerMixin):
    """Render instances to raster arrays; stateless, fit is a no-op."""

    def __init__(self, config: RasterConfig | None = None):
        self.config = config

    def fit(self, X: Any = None, y: Any = None) -> "RasterTransformer":
        return self

    def transform(self, X: Iterable[PredictionInstance]) -> np.ndarray:
        config = self.config or RasterConfig()
        images = [render(inst, config).to_array() for inst in _instance_list(X)]
        return np.stack(images) if images else np.zeros(
            (0, config.height_px, config.width_px, 3), dtype=np.uint8)


class KinematicPredictor(BaseEstimator):
    """One fixed kinematic rollout per instance."""

    def __init__(self, kind: str = "const_velocity_yaw",
                 sample_rate: float = SAMPLE_RATE_HZ, horizon: float = HORIZON_S):
        self.kind = kind
        self.sample_rate = sample_rate
        self.horizon = horizon

    def fit(self, X: Any = None, y: Any = None) -> "KinematicPredictor":
        KinematicModelKind(self.kind)
        return self

    def predict(self, X: Iterable[PredictionInstance]) -> np.ndarray:
        kind = KinematicModelKind(self.kind)
        return np.stack([
            rollout(kind, inst.agent, self.horizon, self.sample_rate).points
            for inst in _instance_list(X)
        ])


class PhysicsOraclePredictor(BaseEstimator):
    """Best-of-four kinematic rollouts chosen with ground truth.

    Evaluation only; instances must carry ground truth.
    """

    def fit(self, X: Any = None, y: Any = None) -> "PhysicsOraclePredictor":
        return self

    def predict(self, X: Iterable[PredictionInstance]) -> np.ndarray:
        return np.stack([
            physics_oracle(inst.agent, inst.ground_truth).points
            for inst in _instance_list(X)
        ])


class NearestModeOracle(BaseEstimator):
    """Classifier upper bound over a fixed mode set, resolved by ground truth."""

    def fit(self, X: Any, y: Any = None) -> "NearestModeOracle":
        """X is the mode set (TrajectorySet or (m, T, 2) array)."""
        self.modes_ = _as_stack(X)
        if len(self.modes_) == 0:
            raise InvalidInputError("mode set is empty")
        return self

    def predict(self, X: Iterable[PredictionInstance]) -> np.ndarray:
        """Index of the mode closest to each instance's ground truth."""
        check_is_fitted(self, "modes_")
        out = []
        for inst in _instance_list(X):
            if inst.ground_truth is None:
                raise InvalidInputError(
                    f"instance {inst.instance_id!r} has no ground truth")
            dists = delta_matrix(inst.ground_truth.points[None], self.modes_)[0]
            out.append(int(dists.argmin()))
        return np.asarray(out, dtype=int)
