"""
Configuration Manager - Layered YAML settings for PWG runs
"""

import json
import logging
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

MODULES_DIR = Path(__file__).resolve().parent.parent / "modules"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

DEFAULTS: Dict[str, Any] = {
    "core": {"log_level": "WARNING", "threads": None},
    "units": "nats",
    "output_format": "csv",
    "modules": {},
}

POSITIVE_SOLVER_FIELDS = ("tol_inner", "tol_outer", "tol_threshold", "fd_step", "q_floor")
COUNT_SOLVER_FIELDS = ("max_iterations", "max_halvings", "multistart", "face_multistart")


def read_settings(path: Path) -> Dict[str, Any]:
    """Parse a .json or .yaml settings file; an empty file gives {}"""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle) if path.suffix.lower() == ".json" else yaml.safe_load(handle)
    if data is not None and not isinstance(data, dict):
        raise ValueError(f"{path.name} must hold a mapping at the top level")
    return data or {}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of base with override laid over it, nested dicts merged key by key"""
    merged = deepcopy(base)
    for key, value in override.items():
        current = merged.get(key)
        merged[key] = deep_merge(current, value) if isinstance(current, dict) and isinstance(value, dict) \
            else deepcopy(value)
    return merged


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class ConfigManager:
    """Built-in defaults, then modules/<name>/<name>_config.yaml, then the main file's modules: section"""

    def __init__(self, config_file: Optional[str] = "config.yaml", modules_dir: Path = MODULES_DIR):
        self.config_file = Path(config_file) if config_file else None
        self.modules_dir = Path(modules_dir)
        self.config: Dict[str, Any] = {}
        self.module_defaults: Dict[str, Dict[str, Any]] = {}
        self.logger = logging.getLogger(__name__)

    def load_config(self) -> bool:
        """Read every layer; False if the main file is unreadable (defaults stay in force)"""
        self.module_defaults = self._scan_module_defaults()
        self.config = deepcopy(DEFAULTS)

        if self.config_file is None:
            return True
        if not self.config_file.exists():
            self.logger.debug(f"{self.config_file} not found, running on defaults")
            return True

        try:
            self.config = deep_merge(DEFAULTS, read_settings(self.config_file))
        except (OSError, ValueError, yaml.YAMLError) as e:
            self.logger.error(f"Could not read {self.config_file}: {e}")
            return False

        self.logger.info(f"Configuration read from {self.config_file}")
        return True

    def _scan_module_defaults(self) -> Dict[str, Dict[str, Any]]:
        found: Dict[str, Dict[str, Any]] = {}
        if not self.modules_dir.is_dir():
            return found

        for package in sorted(p for p in self.modules_dir.iterdir() if p.is_dir()):
            for path in sorted(package.glob("*_config.yaml")) + sorted(package.glob("*_config.json")):
                try:
                    found[package.name] = read_settings(path)
                except (OSError, ValueError, yaml.YAMLError) as e:
                    self.logger.warning(f"Skipping {path.name}: {e}")
                    continue
                self.logger.debug(f"Module defaults for {package.name} from {path.name}")
        return found

    def get(self, key: str, default: Any = None) -> Any:
        """Look up a dotted key such as 'core.threads'"""
        node: Any = self.config
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def set(self, key: str, value: Any) -> None:
        *parents, leaf = key.split(".")
        node = self.config
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value

    def get_module_config(self, module_name: str) -> Dict[str, Any]:
        """Module yaml defaults with the main file's modules.<name> overrides applied"""
        overrides = self.get(f"modules.{module_name}") or {}
        return deep_merge(self.module_defaults.get(module_name, {}), overrides)

    def set_module_config(self, module_name: str, config: Dict[str, Any]) -> None:
        self.set(f"modules.{module_name}", config)

    def validate_config(self) -> Dict[str, List[str]]:
        """Errors make the CLI exit with a usage error; warnings are only logged"""
        errors = self._solver_errors() + self._growth_errors() + self._core_errors()
        warnings = []

        log_level = self.get("core.log_level")
        if log_level and log_level not in LOG_LEVELS:
            warnings.append(f"Unknown log level {log_level!r}, expected one of {', '.join(LOG_LEVELS)}")

        return {"errors": errors, "warnings": warnings}

    def _solver_errors(self) -> List[str]:
        solver = self.get_module_config("solver")
        errors = [f"modules.solver.{name} must be a positive number"
                  for name in POSITIVE_SOLVER_FIELDS
                  if name in solver and not (_is_number(solver[name]) and solver[name] > 0)]
        errors += [f"modules.solver.{name} must be a nonnegative integer"
                   for name in COUNT_SOLVER_FIELDS
                   if name in solver and not (isinstance(solver[name], int) and solver[name] >= 0)]
        return errors

    def _growth_errors(self) -> List[str]:
        growth = self.get_module_config("growth")
        low, high = growth.get("scan_min"), growth.get("scan_max")
        if low is None or high is None:
            return []
        if _is_number(low) and _is_number(high) and 0 < low < high <= 1:
            return []
        return [f"modules.growth needs 0 < scan_min < scan_max <= 1, got {low} and {high}"]

    def _core_errors(self) -> List[str]:
        errors = []
        threads = self.get("core.threads")
        if threads is not None and not (isinstance(threads, int) and threads >= 1):
            errors.append("core.threads must be a positive integer")
        if self.get("units") not in ("nats", "bits"):
            errors.append(f"units must be 'nats' or 'bits', got {self.get('units')!r}")
        if self.get("output_format") not in ("csv", "json"):
            errors.append(f"output_format must be 'csv' or 'json', got {self.get('output_format')!r}")
        return errors
