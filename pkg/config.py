import os
import json
import logging
from enum import Enum

# === App Version ===
APP_VERSION = "0.3.0"
APP_NAME = "LwcLab"

# === Enumeration Caps ===
# 码字穷举上限：2^24 个码字（k 或 n-k 不超过 24）
ENUMERATION_CAP_BITS = 24
# 最小代价 parity 搜索上限：解陪集大小 2^20
COSET_SEARCH_CAP_BITS = 20
# 缺陷状态穷举上限（C(n,t)·2^t）
STATE_ENUMERATION_CAP = 2 ** 20
# 穷举分析把码字打包为 uint64，码长不超过 64；编码时超过 64 位改用 Python 整数
MAX_PACKED_LENGTH = 64
# 每个 LWC 缓存的缺陷位置方程组个数
MASKING_PLAN_CACHE_SIZE = 4096
# numpy 分块枚举时每块的码字数（2^16）
ENUMERATION_BLOCK_BITS = 16

# === Update Models ===
class UpdateModel(str, Enum):
    HAMMING_BALL = "hamming-ball"
    IID_UNIFORM = "iid-uniform"

DEFAULT_UPDATE_MODEL = UpdateModel.HAMMING_BALL.value
DEFAULT_UPDATE_RADIUS = 1

# === Simulation Defaults ===
DEFAULT_SEED = 2016
DEFAULT_TRIALS = 1000
DEFAULT_UPDATES_PER_TRIAL = 8
CSV_COLUMNS = ["trial", "step", "defect_state", "cost", "bound", "minimal", "cells_touched", "status"]
SIMULATION_FILE_PREFIX = "simulation"

# === Text Forms ===
NORMAL_CELL_CHAR = "*"   # λ in state strings

# === Logging Settings ===
LOG_DIR = "logs"
LOG_FILE = "lwclab.log"
LOG_LEVEL = "INFO"

# === Preset Config Keys ===
PRESET_KEYS = [
    "enumeration_cap_bits",
    "coset_search_cap_bits",
    "state_enumeration_cap",
    "update_model",
    "update_radius",
    "seed",
    "log_dir",
    "log_level",
]

INT_SETTING_KEYS = ["enumeration_cap_bits", "coset_search_cap_bits", "state_enumeration_cap", "update_radius", "seed"]

CONFIG_FILE_NAME = ".lwclab_config.json"
CONFIG_DIR = os.path.expanduser("~/.lwclab")
CONFIG_PATH = os.path.join(CONFIG_DIR, CONFIG_FILE_NAME)

def save_settings(settings: dict, path: str = CONFIG_PATH) -> bool:
    """保存用户设置到配置文件，只写 PRESET_KEYS 中的键"""
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump({k: settings[k] for k in PRESET_KEYS if k in settings}, f, ensure_ascii=False, indent=4)
        return True
    except OSError:
        logging.getLogger(__name__).error(f"配置保存失败: {path}", exc_info=True)
        return False

def load_settings(path: str = CONFIG_PATH) -> dict:
    """从配置文件加载用户设置"""
    try:
        if os.path.exists(path):
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
    except Exception:
        logging.getLogger(__name__).error("配置加载失败", exc_info=True)
    return {}


# === Settings Defaults & Compatibility ===
def apply_defaults(settings: dict) -> dict:
    """确保配置包含所有默认值（适用于旧版配置文件）"""
    defaults = {
        "enumeration_cap_bits": ENUMERATION_CAP_BITS,
        "coset_search_cap_bits": COSET_SEARCH_CAP_BITS,
        "state_enumeration_cap": STATE_ENUMERATION_CAP,
        "update_model": DEFAULT_UPDATE_MODEL,
        "update_radius": DEFAULT_UPDATE_RADIUS,
        "seed": DEFAULT_SEED,
        "log_dir": LOG_DIR,
        "log_level": LOG_LEVEL,
    }
    for key, value in defaults.items():
        if key not in settings:
            settings[key] = value
        elif key in INT_SETTING_KEYS:
            try:
                settings[key] = int(settings[key])
            except Exception:
                settings[key] = value
    return settings


def coerce_setting(key: str, value):
    """命令行写入前校验单个设置；非法时抛 ValueError"""
    if key not in PRESET_KEYS:
        raise ValueError(f"unknown setting {key!r}; known: {', '.join(PRESET_KEYS)}")
    if key in INT_SETTING_KEYS:
        try:
            value = int(value)
        except (TypeError, ValueError):
            raise ValueError(f"setting {key!r} needs an integer, got {value!r}") from None
        if value < 0 and key != "seed":
            raise ValueError(f"setting {key!r} must be non-negative")
    elif key == "update_model" and value not in {m.value for m in UpdateModel}:
        raise ValueError(f"unknown update model {value!r}")
    elif key == "log_level" and str(value).upper() not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
        raise ValueError(f"unknown log level {value!r}")
    return value


_settings_cache = None

def get_setting(key: str):
    """读取生效配置（文件覆盖默认值）"""
    global _settings_cache
    if _settings_cache is None:
        _settings_cache = apply_defaults(load_settings())
    return _settings_cache[key]

def reset_settings_cache():
    global _settings_cache
    _settings_cache = None
