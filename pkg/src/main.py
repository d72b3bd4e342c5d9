"""Main entry point for dartwin-tools."""

import logging
import sys

from src.cli import run
from src.config import setup_logging

logger = logging.getLogger("dartwin")


def main():
    """Configure logging and run one command."""
    setup_logging()
    logger.debug(f"Invoked with {sys.argv[1:]}")

    try:
        status = run(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Interrupted")
        status = 130
    sys.exit(status)


if __name__ == "__main__":
    main()
