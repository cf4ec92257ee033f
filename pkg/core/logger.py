"""
Logger - Console and rotating-file logging for PWG runs
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Dict, List, Optional

CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5

# computation packages log under logging.getLogger(__name__), i.e. "modules.<pkg>.<file>"
ROUTED_TREES = ("modules",)


def parse_level(level: str) -> int:
    """Map a level name to its logging constant; unknown names fall back to INFO"""
    value = logging.getLevelName(str(level).upper())
    return value if isinstance(value, int) else logging.INFO


class Logger:
    """Owns the handlers of the application logger and of the modules.* tree"""

    def __init__(self, name: str = "PWG", log_file: Optional[str] = None, level: str = "WARNING"):
        self.name = name
        self.log_file = Path(log_file) if log_file else None
        self.loggers: Dict[str, logging.Logger] = {}
        self.console: Optional[logging.Handler] = None
        self.setup_logging(level)

    def setup_logging(self, level: str = "WARNING") -> None:
        # stdout is reserved for results
        self.console = logging.StreamHandler(sys.stderr)
        self.console.setLevel(parse_level(level))
        self.console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt="%H:%M:%S"))

        handlers: List[logging.Handler] = [self.console]
        if self.log_file is not None:
            handlers.append(self._file_handler(self.log_file))

        for tree in (self.name,) + ROUTED_TREES:
            logger = logging.getLogger(tree)
            logger.setLevel(logging.DEBUG)
            logger.propagate = False
            logger.handlers = list(handlers)
            self.loggers[tree] = logger

    @staticmethod
    def _file_handler(path: Path) -> logging.Handler:
        path.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.handlers.RotatingFileHandler(path, maxBytes=MAX_LOG_BYTES,
                                                       backupCount=LOG_BACKUPS, encoding="utf-8")
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(logging.Formatter(FILE_FORMAT))
        return handler

    def get_logger(self, name: str) -> logging.Logger:
        """Child logger for one component, e.g. get_logger('sweep') -> 'PWG.sweep'"""
        full_name = name if name == self.name else f"{self.name}.{name}"
        return self.loggers.setdefault(full_name, logging.getLogger(full_name))

    def set_level(self, level: str) -> None:
        """Console level only; the file keeps everything from DEBUG up"""
        if self.console is not None:
            self.console.setLevel(parse_level(level))

    def log_performance(self, operation: str, duration: float, module_name: str = "performance") -> None:
        self.get_logger(module_name).info(f"PERF: {operation} took {duration:.3f}s")

    def flush_logs(self) -> None:
        for logger in self.loggers.values():
            for handler in logger.handlers:
                handler.flush()
