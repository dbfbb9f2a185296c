"""
Configure logging for the command line tools.
"""
import logging
import os
from datetime import datetime
from typing import Optional

from src.config.config import LOG_DIR, LOG_FORMAT, LOG_LEVEL
from src.utils.utils import safe_get_config


def setup_logging(log_dir: Optional[str] = None, level: Optional[str] = None) -> logging.Logger:
    """
    Set up logging for a CLI run.

    Args:
        log_dir: Directory to store log files (GPDD_LOG_DIR, then config.LOG_DIR)
        level: Level name (GPDD_LOG_LEVEL, then config.LOG_LEVEL)

    Returns:
        The package root logger "gpdd"
    """
    log_dir = log_dir or safe_get_config("LOG_DIR", LOG_DIR)
    level = (level or safe_get_config("LOG_LEVEL", LOG_LEVEL)).upper()

    if not os.path.exists(log_dir):
        os.makedirs(log_dir)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = os.path.join(log_dir, f"gpdd_{timestamp}.log")

    stream = logging.StreamHandler()
    stream.setLevel(logging.WARNING)
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=LOG_FORMAT,
        handlers=[
            logging.FileHandler(log_file),
            stream,
        ],
        force=True,
    )

    logger = logging.getLogger("gpdd")
    logger.setLevel(getattr(logging, level, logging.INFO))
    logger.info(f"Logging system initialized ({log_file})")
    return logger
