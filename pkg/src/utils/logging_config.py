"""Logging configuration for the command-line tools."""

import logging
import sys

def setup_logging(verbosity: int = 0):
    """
    Configure logging for the application.

    Reports go to stdout, so log records are written to stderr only.

    Args:
        verbosity: 0 for WARNING, 1 for INFO, 2 or more for DEBUG
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    # Create a formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # Create a console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    # Configure the root logger, replacing handlers from an earlier call
    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
    root_logger.setLevel(level)
    root_logger.addHandler(console_handler)

    # The DM solver builds thousands of joint tables; -vvv shows each one
    if verbosity < 3:
        logging.getLogger('src.utils.joint_pmf').setLevel(max(level, logging.INFO))
