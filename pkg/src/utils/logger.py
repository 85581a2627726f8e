"""Logging configuration"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

import colorlog

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(log_dir: Optional[str] = None, log_level: str = "INFO") -> logging.Logger:
    """
    Set up application logging

    Console output goes to stderr so that stdout carries only command output.

    Args:
        log_dir: Directory for a timestamped log file (None disables the file)
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)

    Returns:
        Root logger instance
    """
    console = colorlog.StreamHandler(sys.stderr)
    console.setFormatter(colorlog.ColoredFormatter(
        '%(log_color)s%(levelname)-8s%(reset)s %(name)s - %(message)s',
        log_colors={
            'DEBUG': 'cyan',
            'INFO': 'green',
            'WARNING': 'yellow',
            'ERROR': 'red',
            'CRITICAL': 'bold_red',
        }
    ))
    handlers = [console]

    log_file = None
    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        log_file = log_path / f"dos_impact_{datetime.now():%Y%m%d_%H%M%S}.log"
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, log_level.upper(), logging.INFO),
        handlers=handlers,
        force=True
    )

    logger = logging.getLogger()
    logger.debug("=" * 60)
    logger.debug("DoS Impact Simulator")
    logger.debug("=" * 60)
    if log_file:
        logger.info(f"Log file: {log_file}")
    logger.debug(f"Log level: {log_level}")

    return logger
