"""Logging utilities for the KMF data-completion toolkit."""

import logging
import sys
from pathlib import Path
from typing import Optional
from config.settings import get_settings

APP_LOGGER_NAME = "kmf_completion"

_logger: Optional[logging.Logger] = None


def setup_logger(name: str = APP_LOGGER_NAME, level: Optional[str] = None) -> logging.Logger:
    """
    Set up and configure the application logger.

    Args:
        name: Logger name
        level: Optional level name overriding LOG_LEVEL

    Returns:
        Configured logger instance
    """
    global _logger

    if _logger is not None:
        if level:
            _logger.setLevel(getattr(logging, level.upper(), logging.INFO))
        return _logger

    settings = get_settings()
    level_name = (level or settings.log_level).upper()

    # Create logger
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level_name, logging.INFO))

    # Prevent duplicate handlers
    if logger.handlers:
        _logger = logger
        return logger

    # Create formatters
    detailed_formatter = logging.Formatter(
        fmt="%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )
    simple_formatter = logging.Formatter(
        fmt="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%H:%M:%S"
    )

    # Console handler - warnings and errors
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(simple_formatter)
    logger.addHandler(console_handler)

    # Separate handler for INFO level logs
    info_handler = logging.StreamHandler(sys.stdout)
    info_handler.setLevel(logging.INFO)
    info_handler.setFormatter(simple_formatter)
    info_handler.addFilter(lambda record: record.levelno == logging.INFO)
    logger.addHandler(info_handler)

    # File handler (per-iteration DEBUG records end up here)
    try:
        Path(settings.log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(settings.log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(detailed_formatter)
        logger.addHandler(file_handler)
    except Exception as e:
        logger.warning(f"Could not set up file logging: {e}")

    _logger = logger
    logger.debug(f"Logger initialized (level: {level_name})")

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger below the application logger.

    Module loggers are children of the application logger, so they share its
    handlers while keeping the module name in the file log.

    Args:
        name: Optional module name (defaults to the application logger)

    Returns:
        Logger instance
    """
    app_logger = _logger if _logger is not None else setup_logger()
    if not name or name == APP_LOGGER_NAME:
        return app_logger
    return app_logger.getChild(name)
