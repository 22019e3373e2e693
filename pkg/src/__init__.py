"""sentryos: compile, schedule and simulate SDCNNs on many-core neuromorphic hardware."""

import logging
import os

from dotenv import load_dotenv
from pythonjsonlogger import jsonlogger

# SENTRYOS_SETTINGS and SENTRYOS_HARDWARE may be set from .env
load_dotenv()

if not logging.getLogger().handlers:
    level = os.environ.get("SENTRYOS_LOG_LEVEL", "INFO").upper()
    handler = logging.StreamHandler()
    handler.setFormatter(
        jsonlogger.JsonFormatter("%(asctime)s %(name)s %(levelname)s %(funcName)s %(message)s")
    )
    logging.basicConfig(level=level, handlers=[handler])
