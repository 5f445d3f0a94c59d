import pytest

from nuscenes_export.config import ExportConfig

from .fake_world import FakeSource


@pytest.fixture
def fake_source():
    return FakeSource()


@pytest.fixture
def config(tmp_path):
    return ExportConfig(dataset_root=tmp_path, split="train")
