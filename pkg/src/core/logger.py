"""
Logging configuration for the LPS toolkit
Loguru sinks on stderr (stdout carries reports), optional JSON lines and file rotation
"""
import sys
from typing import Any, Optional
from loguru import logger
from src.core.config import settings

HUMAN_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[name]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)
PLAIN_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level} | {extra[name]}:{function}:{line} | {message}"


def setup_logging(
    level: Optional[str] = None,
    serialize: Optional[bool] = None,
    log_file: Optional[str] = None,
) -> None:
    """Configure loguru sinks; arguments default to the global settings"""

    level = (level or settings.log_level).upper()
    serialize = settings.log_serialize if serialize is None else serialize
    log_file = log_file or settings.log_file

    # Remove default loguru handler
    logger.remove()
    logger.configure(extra={"name": settings.app_name})

    if serialize:
        logger.add(
            sys.stderr,
            format=PLAIN_FORMAT,
            level=level,
            serialize=True,
            backtrace=True,
            diagnose=False,
        )
    else:
        logger.add(
            sys.stderr,
            format=HUMAN_FORMAT,
            level=level,
            colorize=True,
            backtrace=True,
            diagnose=settings.environment != "production",
        )

    if log_file:
        logger.add(
            log_file,
            rotation="50 MB",
            retention="10 days",
            compression="zip",
            level=level,
            format=PLAIN_FORMAT,
            serialize=serialize,
        )

    logger.debug(f"Logging configured for {settings.environment} environment at {level}")


def get_logger(name: str) -> Any:
    """Get a logger instance with the given name"""
    return logger.bind(name=name)


# Initialize logging
setup_logging()
