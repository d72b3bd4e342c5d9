"""Configuration management for dartwin-tools."""

import os
import logging
import sys
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent

# Source files picked up from an input's directory
SOURCE_SUFFIXES = (".dartwin", ".sysml")

# Bundled pattern library
PATTERN_DIR = Path(os.getenv("DARTWIN_PATTERN_DIR", PROJECT_ROOT / "patterns"))

# Default style override file for rendering
DEFAULT_STYLE_PATH = os.getenv("DARTWIN_STYLE")

# Logging configuration
LOG_LEVEL = os.getenv("DARTWIN_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("DARTWIN_LOG_FILE")


def validate_config():
    """Validate that configured paths exist."""
    problems = []
    if DEFAULT_STYLE_PATH and not Path(DEFAULT_STYLE_PATH).is_file():
        problems.append(f"DARTWIN_STYLE={DEFAULT_STYLE_PATH}")
    if not PATTERN_DIR.is_dir():
        problems.append(f"DARTWIN_PATTERN_DIR={PATTERN_DIR}")

    if problems:
        raise ValueError(f"Configured paths do not exist: {', '.join(problems)}")


def setup_logging():
    """Configure logging to the diagnostic stream and an optional file."""
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_level = getattr(logging, LOG_LEVEL.upper(), logging.WARNING)

    # Create logger
    logger = logging.getLogger("dartwin")
    logger.setLevel(log_level)
    if logger.handlers:
        return logger

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(log_format))
    logger.addHandler(console_handler)

    # File handler
    if LOG_FILE:
        file_handler = logging.FileHandler(LOG_FILE)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter(log_format))
        logger.addHandler(file_handler)

    return logger
