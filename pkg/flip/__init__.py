import logging
import os
import sys

from loguru import logger as _loguru_logger

_level = os.environ.get("LOGGING_LEVEL", "INFO")

logger = logging.getLogger()
logger.setLevel(_level)

# loguru ships its own stderr sink at DEBUG; align it with LOGGING_LEVEL.
# sys.stderr is looked up per message so redirected streams receive the logs.
_loguru_logger.remove()
_loguru_logger.add(lambda message: sys.stderr.write(message), level=_level)
