"""Utility modules"""
from .config_manager import ConfigManager
from .logger import setup_logging

__all__ = ['ConfigManager', 'setup_logging']
