"""
Configuration module for the randomization inference engine
"""
import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .exceptions import InputFormatError


class Settings:
    """Engine settings and configuration"""

    # Load environment variables
    load_dotenv()

    # Application
    APP_NAME: str = "Randomization Inference Engine"
    APP_VERSION: str = "0.1.0"
    APP_DESCRIPTION: str = "Neymanian and Fisherian randomization inference for finite-population experiments"

    # Fixed rejection levels reported on every test result
    REJECTION_LEVELS: tuple = (0.01, 0.05, 0.10)

    def __init__(self):
        """Read the environment at construction time"""
        self.LOG_LEVEL: str = os.getenv("RANDINF_LOG_LEVEL", "INFO")

        # Inference defaults
        self.DEFAULT_DRAWS: int = int(os.getenv("RANDINF_DRAWS", "100000"))
        self.DEFAULT_ALPHA: float = float(os.getenv("RANDINF_ALPHA", "0.05"))
        self.ENUMERATION_CAP: int = int(os.getenv("RANDINF_ENUMERATION_CAP", "10000000"))
        self.PAIR_EXACT_LIMIT: int = int(os.getenv("RANDINF_PAIR_EXACT_LIMIT", "20"))
        self.BATCH_SIZE: int = int(os.getenv("RANDINF_BATCH_SIZE", "10000"))

        # Execution
        workers = os.getenv("RANDINF_WORKERS")
        self.WORKERS: Optional[int] = int(workers) if workers and workers.strip() else None
        self.OUTPUT_DIR: str = os.getenv("RANDINF_OUTPUT_DIR", "results")

    @property
    def effective_workers(self) -> int:
        """
        Resolve the number of worker processes

        Returns:
            int: Configured worker count, or the number of available cores
        """
        if self.WORKERS and self.WORKERS > 0:
            return self.WORKERS
        return os.cpu_count() or 1


def load_json_config(path: str) -> Dict[str, Any]:
    """
    Load a JSON configuration file used to pre-populate CLI options

    Args:
        path: Path to the JSON file

    Returns:
        Dict[str, Any]: Parsed configuration mapping

    Raises:
        InputFormatError: If the file is missing or not a JSON object
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise InputFormatError(f"Config file {path} not found")

    try:
        data = json.loads(config_path.read_text())
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno)

    if not isinstance(data, dict):
        raise InputFormatError(f"Config file {path} must contain a JSON object")
    return data


# Global settings instance
settings = Settings()
