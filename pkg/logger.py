# logger.py
import logging
import os
import sys

VERSION = '1.0.0'

# Recognised configuration variables, grouped the way README documents them
KNOWN_ENV_VARS = [
    # Logging
    'LOG_LEVEL',

    # Numerical limits
    'QA_MAX_QUBITS',
    'QA_STRUCTURE_TOL',
    'QA_NORM_TOL',
    'QA_EIG_CLIP',
    'QA_PROB_FLOOR',
    'QA_INTELLIGENT_TOL',
    'QA_TIE_TOL',

    # Runtime
    'QA_GATE_CACHE_SIZE',
    'QA_SWEEP_WORKERS',
]


def configure_logging(default_level: str = 'WARNING') -> logging.Logger:
    """Configure and return the root simulator logger based on LOG_LEVEL."""
    log_level_name = os.environ.get('LOG_LEVEL', default_level).upper()
    log_levels = {
        'DEBUG': logging.DEBUG,
        'INFO': logging.INFO,
        'WARNING': logging.WARNING,
        'ERROR': logging.ERROR,
        'CRITICAL': logging.CRITICAL
    }
    log_level = log_levels.get(log_level_name, logging.WARNING)

    # Diagnostics go to stderr; stdout is reserved for data
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr
    )

    return logging.getLogger('qa_intel')


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger for a specific module."""
    return logging.getLogger(f'qa_intel.{name}')


def log_startup_info(logger: logging.Logger) -> None:
    """Log version and every recognised environment variable that is set."""
    logger.info(f"Starting QA Intelligence Simulator v{VERSION}")
    logger.info(f"Log level: {os.environ.get('LOG_LEVEL', 'WARNING')}")

    for var in KNOWN_ENV_VARS:
        if var in os.environ:
            logger.info(f"{var}: {os.environ[var]}")
