import sys
from pathlib import Path

import pytest

# 添加项目路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import config
from logger import reset_error_tracking


@pytest.fixture(autouse=True)
def default_settings():
    """Ignore any ~/.lwclab config so caps and defaults are the shipped ones."""
    config._settings_cache = config.apply_defaults({})
    reset_error_tracking()
    yield
    config.reset_settings_cache()
