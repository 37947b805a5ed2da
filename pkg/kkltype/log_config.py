import logging
import os
import sys

LOG_FILE_ENV = "KKLTYPE_LOG_FILE"
LOG_LEVEL_ENV = "KKLTYPE_LOG_LEVEL"


def setup_logging():
    """
    Configures the package logger to output to stderr and, when KKLTYPE_LOG_FILE
    is set, to a file as well. Stdout is left alone: it carries report bytes.
    This should be called once at the start of the application.
    """
    logger = logging.getLogger("kkltype")
    level_name = os.environ.get(LOG_LEVEL_ENV, "INFO").upper()
    level = getattr(logging, level_name, logging.INFO)
    logger.setLevel(level)

    # Prevent propagation to the root logger if it has default handlers
    logger.propagate = False

    # If handlers are already configured, do nothing.
    if logger.hasHandlers():
        return

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    log_file_path = os.environ.get(LOG_FILE_ENV)
    if log_file_path:
        try:
            file_handler = logging.FileHandler(log_file_path, mode='w')
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except IOError as e:
            print(f"Error: Could not set up log file at {log_file_path}: {e}", file=sys.stderr)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)


def get_logger(name: str) -> logging.Logger:
    """
    Returns a logger instance with the specified name.
    It will be a child of the 'kkltype' logger.
    """
    if name.startswith("kkltype."):
        name = name[len("kkltype."):]
    return logging.getLogger(f"kkltype.{name}")


# Any module that needs logging can do `from .log_config import get_logger`
# and then `logger = get_logger(__name__)`.
setup_logging()
