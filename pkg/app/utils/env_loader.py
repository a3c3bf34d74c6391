import os
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

ENV_PREFIXES = ("POLYMEINARDUS_", "PORT", "ALLOW_EXTERNAL_ACCESS")


def load_env_file(env_file: str | os.PathLike = ".env") -> list[str]:
    """
    Load settings from a .env file for local runs.

    Only keys the package reads are taken; variables already present in the
    environment win over the file. Returns the keys that were set.
    """
    env_path = Path(env_file)
    if not env_path.exists():
        logger.debug(f"Environment file {env_file} not found")
        return []

    loaded = []
    try:
        with open(env_path) as f:
            for lineno, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("export "):
                    line = line[len("export ") :]
                if "=" not in line:
                    logger.warning(f"{env_file}:{lineno}: ignoring line without '='")
                    continue

                key, value = line.split("=", 1)
                key = key.strip()
                value = value.strip().strip("'\"")

                if not key.startswith(ENV_PREFIXES):
                    continue
                if key not in os.environ:
                    os.environ[key] = value
                    loaded.append(key)
    except OSError as e:
        logger.error(f"Error loading environment file: {e}")
        return loaded

    logger.info(f"Loaded {len(loaded)} settings from {env_file}")
    return loaded
