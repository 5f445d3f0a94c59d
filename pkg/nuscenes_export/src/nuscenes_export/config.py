"""Export configuration.

History, horizon and rate are fixed by the scene split format the exporter
writes (2 s of history and a 6 s future, both at 2 Hz); they are fields so
the values are visible and recorded, not so they can drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

SPLITS = ("train", "train_val", "val")


@dataclass(frozen=True)
class ExportConfig:
    dataset_root: Path
    split: str
    history_seconds: float = 2.0
    horizon_seconds: float = 6.0
    sample_rate_hz: float = 2.0
    lane_radius_m: float = 10.0
    # agent-frame half extent of the map clip box (60 m box -> 30 m half)
    map_half_extent_m: float = 30.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "dataset_root", Path(self.dataset_root))
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")
        if (self.history_seconds, self.horizon_seconds, self.sample_rate_hz) != (2.0, 6.0, 2.0):
            raise ValueError("history/horizon/rate are fixed at 2 s / 6 s / 2 Hz "
                             "by the scene split format")
        if self.lane_radius_m <= 0 or self.map_half_extent_m <= 0:
            raise ValueError("search radius and map extent must be positive")

    @property
    def future_points(self) -> int:
        return round(self.horizon_seconds * self.sample_rate_hz)

    @property
    def history_points(self) -> int:
        return round(self.history_seconds * self.sample_rate_hz)
