"""
Tests for randomization_inference.core.config module
"""
import json
import os
from unittest.mock import patch

import pytest

from randomization_inference.core.config import Settings, load_json_config
from randomization_inference.core.exceptions import InputFormatError


class TestSettings:
    """Test Settings class"""

    def test_default_values(self):
        """Test that default values are set correctly"""
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings()
        assert settings.DEFAULT_DRAWS == 100000
        assert settings.DEFAULT_ALPHA == 0.05
        assert settings.ENUMERATION_CAP == 10_000_000
        assert settings.PAIR_EXACT_LIMIT == 20
        assert settings.OUTPUT_DIR == "results"
        assert settings.LOG_LEVEL == "INFO"
        assert settings.WORKERS is None

    def test_rejection_levels(self):
        """Test the fixed levels reported on every test result"""
        assert Settings.REJECTION_LEVELS == (0.01, 0.05, 0.10)

    def test_environment_overrides(self):
        """Test that RANDINF_* variables override the defaults"""
        env = {
            "RANDINF_DRAWS": "500",
            "RANDINF_ALPHA": "0.1",
            "RANDINF_ENUMERATION_CAP": "1000",
            "RANDINF_WORKERS": "3",
            "RANDINF_LOG_LEVEL": "DEBUG",
        }
        with patch.dict(os.environ, env, clear=True):
            settings = Settings()
        assert settings.DEFAULT_DRAWS == 500
        assert settings.DEFAULT_ALPHA == 0.1
        assert settings.ENUMERATION_CAP == 1000
        assert settings.WORKERS == 3
        assert settings.LOG_LEVEL == "DEBUG"

    def test_effective_workers_uses_configured_value(self):
        """Test that a configured worker count wins"""
        with patch.dict(os.environ, {"RANDINF_WORKERS": "2"}, clear=True):
            assert Settings().effective_workers == 2

    def test_effective_workers_defaults_to_cpu_count(self):
        """Test that the core count is used when nothing is configured"""
        with patch.dict(os.environ, {}, clear=True), patch("os.cpu_count", return_value=6):
            assert Settings().effective_workers == 6

    def test_blank_workers_is_unset(self):
        """Test that an empty RANDINF_WORKERS means no override"""
        with patch.dict(os.environ, {"RANDINF_WORKERS": "  "}, clear=True):
            assert Settings().WORKERS is None


class TestLoadJsonConfig:
    """Test load_json_config function"""

    def test_loads_object(self, temp_dir):
        """Test reading a JSON object"""
        path = os.path.join(temp_dir, "config.json")
        with open(path, "w") as f:
            json.dump({"design": "crd", "n": 10}, f)
        assert load_json_config(path) == {"design": "crd", "n": 10}

    def test_missing_file(self, temp_dir):
        """Test that a missing file is an input format error"""
        with pytest.raises(InputFormatError, match="not found"):
            load_json_config(os.path.join(temp_dir, "absent.json"))

    def test_invalid_json_reports_line(self, temp_dir):
        """Test that malformed JSON reports the failing line"""
        path = os.path.join(temp_dir, "bad.json")
        with open(path, "w") as f:
            f.write('{\n  "n": 10,\n  oops\n}')
        with pytest.raises(InputFormatError) as exc_info:
            load_json_config(path)
        assert exc_info.value.line == 3

    def test_rejects_non_object(self, temp_dir):
        """Test that a JSON array is refused"""
        path = os.path.join(temp_dir, "list.json")
        with open(path, "w") as f:
            f.write("[1, 2]")
        with pytest.raises(InputFormatError, match="JSON object"):
            load_json_config(path)
