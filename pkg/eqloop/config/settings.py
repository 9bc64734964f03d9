import os
from pathlib import Path
from typing import Dict, Any, Optional

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


def _load_defaults(path: Optional[str] = None) -> Dict[str, Any]:
    config_path = Path(path) if path else PROJECT_ROOT / "config" / "engine.yaml"
    if not config_path.exists():
        return {}
    with open(config_path, "r") as f:
        return yaml.safe_load(f) or {}


_DEFAULTS = _load_defaults(os.getenv("EQLOOP_CONFIG"))


class EngineConfig:
    # Computation defaults
    DEFAULT_MAX_DEGREE = int(os.getenv("EQLOOP_MAX_DEGREE", _DEFAULTS.get("default_max_degree", 8)))
    DEFAULT_MODE = _DEFAULTS.get("default_mode", "over-R")
    DEFAULT_OUTPUT = _DEFAULTS.get("default_output", "human")
    DENSE_THRESHOLD = int(os.getenv("EQLOOP_DENSE_THRESHOLD", _DEFAULTS.get("dense_threshold", 400)))
    MAX_WORKERS = int(os.getenv("EQLOOP_MAX_WORKERS", _DEFAULTS.get("max_workers", 1)))
    CACHE_DIR = os.getenv("EQLOOP_CACHE_DIR", _DEFAULTS.get("cache_dir", "")) or None
    CHECK_DEGREE = int(_DEFAULTS.get("check_degree", 6))
    CROSSCHECK_DEGREE = int(os.getenv("EQLOOP_CROSSCHECK_DEGREE", _DEFAULTS.get("crosscheck_degree", 8)))
    CHECK_SEED = int(_DEFAULTS.get("check_seed", 20240611))

    # Logging configuration
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("EQLOOP_LOG_FILE")
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    MODES = ("over-R", "over-k", "both")

    @classmethod
    def get_logging_config(cls, level: Optional[str] = None) -> Dict[str, Any]:
        level = level or cls.LOG_LEVEL
        handlers: Dict[str, Any] = {
            "default": {
                "level": level,
                "formatter": "standard",
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
            },
        }
        if cls.LOG_FILE:
            handlers["file"] = {
                "level": level,
                "formatter": "standard",
                "class": "logging.FileHandler",
                "filename": cls.LOG_FILE,
                "mode": "a",
            }
        return {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "standard": {
                    "format": cls.LOG_FORMAT
                },
            },
            "handlers": handlers,
            "loggers": {
                "": {
                    "handlers": list(handlers),
                    "level": level,
                    "propagate": False
                }
            }
        }
