#!/usr/bin/env python3
# Main entry point for the warpdrive command line
# Sets up logging on stderr and hands argv to the CLI
import logging
import os
import sys
from typing import List, Optional

from src.core.config import LOG_DATEFMT, LOG_FORMAT
from src.ui_handlers.cli import run


def main(argv: Optional[List[str]] = None) -> int:
    level = os.environ.get("WARPDRIVE_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        stream=sys.stderr,
    )
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
