"""
PWG Core - Configuration and logging infrastructure for the pseudoweight growth toolkit
"""

__version__ = "0.1.0"
__author__ = "PWG Development Team"

from .config_manager import ConfigManager
from .logger import Logger

__all__ = ['ConfigManager', 'Logger']
