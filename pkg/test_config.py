#!/usr/bin/env python3
"""
Test Configuration - ConfigManager layering and Logger routing
"""

import logging
import sys
from pathlib import Path

import pytest

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from core.config_manager import ConfigManager
from core.logger import Logger
from modules.growth import GrowthConfig
from modules.solver import SolverConfig


def test_defaults_without_config_file(tmp_path):
    config = ConfigManager(str(tmp_path / "missing.yaml"))
    assert config.load_config()
    assert config.get("units") == "nats"
    assert config.get("core.log_level") == "WARNING"
    assert config.get("core.threads") is None
    assert config.get("no.such.key", 7) == 7
    assert config.validate_config()["errors"] == []


def test_module_defaults_are_loaded(tmp_path):
    config = ConfigManager(str(tmp_path / "missing.yaml"))
    config.load_config()
    solver = SolverConfig.from_dict(config.get_module_config("solver"))
    assert solver == SolverConfig()
    growth = GrowthConfig.from_dict(config.get_module_config("growth"))
    assert growth == GrowthConfig()
    assert config.get_module_config("oracle")["fix_identity"] is False


def test_main_file_overrides_module_files(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("units: bits\nmodules:\n  solver:\n    tol_outer: 1.0e-10\n  growth:\n    scan_points: 50\n")
    config = ConfigManager(str(path))
    assert config.load_config()
    assert config.get("units") == "bits"
    solver = config.get_module_config("solver")
    assert solver["tol_outer"] == 1e-10
    assert solver["tol_inner"] == 1e-11
    assert config.get_module_config("growth")["scan_points"] == 50


def test_set_with_dot_notation(tmp_path):
    config = ConfigManager(str(tmp_path / "missing.yaml"))
    config.load_config()
    config.set("core.threads", 4)
    assert config.get("core.threads") == 4
    config.set_module_config("growth", {"scan_max": 0.5})
    assert config.get_module_config("growth")["scan_max"] == 0.5


@pytest.mark.parametrize("text, message", [
    ("modules:\n  solver:\n    tol_outer: -1\n", "tol_outer"),
    ("modules:\n  solver:\n    multistart: 1.5\n", "multistart"),
    ("modules:\n  solver:\n    q_floor: 0\n", "q_floor"),
    ("modules:\n  solver:\n    face_multistart: -2\n", "face_multistart"),
    ("modules:\n  growth:\n    scan_min: 0.9\n    scan_max: 0.1\n", "scan_min"),
    ("core:\n  threads: 0\n", "core.threads"),
    ("output_format: xml\n", "output_format"),
])
def test_validation_errors(tmp_path, text, message):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    config = ConfigManager(str(path))
    assert config.load_config()
    errors = config.validate_config()["errors"]
    assert any(message in e for e in errors)


def test_unknown_log_level_is_a_warning(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("core:\n  log_level: LOUD\n")
    config = ConfigManager(str(path))
    config.load_config()
    issues = config.validate_config()
    assert issues["errors"] == []
    assert issues["warnings"]


def test_malformed_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("core: [unclosed\n")
    config = ConfigManager(str(path))
    assert not config.load_config()
    assert config.get("units") == "nats"


def test_json_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"output_format": "json"}')
    config = ConfigManager(str(path))
    assert config.load_config()
    assert config.get("output_format") == "json"


def test_logger_writes_component_and_module_records(tmp_path):
    log_file = tmp_path / "logs" / "pwg.log"
    logger = Logger("PWGTest", log_file=str(log_file), level="ERROR")
    logger.get_logger("sweep").info("component record")
    logging.getLogger("modules.solver.stationary").debug("module record")
    logger.log_performance("sweep (3,6)", 0.25)
    logger.flush_logs()
    text = log_file.read_text(encoding="utf-8")
    assert "component record" in text
    assert "module record" in text
    assert "PERF: sweep (3,6) took 0.250s" in text


def test_logger_console_level(capsys):
    logger = Logger("PWGConsole", level="WARNING")
    logger.get_logger("main").info("hidden")
    logger.set_level("INFO")
    logger.get_logger("main").info("shown")
    logger.flush_logs()
    captured = capsys.readouterr()
    assert "hidden" not in captured.err
    assert "shown" in captured.err
    assert captured.out == ""
