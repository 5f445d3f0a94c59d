"""Export nuScenes prediction-challenge scenes to flat JSON split files."""

from .config import SPLITS, ExportConfig
from .export import SCENE_RECORD_SCHEMA, ExportError, build_records, export_split
from .frames import clip_polygon, heading_to_agent_frame, to_agent_frame, wrap_angle
from .source import DevkitSource, SceneSource

__all__ = [
    "SPLITS",
    "ExportConfig",
    "SCENE_RECORD_SCHEMA",
    "ExportError",
    "build_records",
    "export_split",
    "clip_polygon",
    "heading_to_agent_frame",
    "to_agent_frame",
    "wrap_angle",
    "DevkitSource",
    "SceneSource",
]

__version__ = "0.1.0"
