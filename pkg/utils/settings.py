import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class LabSettings(BaseModel):
    """
    Process-wide defaults read from the environment.

    Attributes:
        out_dir (str): Default directory for instance bundles and benchmark files
        log_level (str): Name of the logging level applied by the CLI
        seed (int): Seed used whenever a command takes ``--seed`` and none is given
    """
    out_dir: str = "out"
    log_level: str = "WARNING"
    seed: int = Field(default=0, ge=0)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level


def load_settings(env_file: Optional[str] = None) -> LabSettings:
    """
    Load ``.env`` (if present) and build :class:`LabSettings` from ``CFL_LAB_*`` variables.

    Args:
        env_file (Optional[str]): Explicit dotenv path; the default search is used when omitted

    Returns:
        LabSettings: Validated settings
    """
    load_dotenv(env_file)
    values = {
        "out_dir": os.getenv("CFL_LAB_OUT_DIR"),
        "log_level": os.getenv("CFL_LAB_LOG_LEVEL"),
        "seed": os.getenv("CFL_LAB_SEED"),
    }
    return LabSettings.model_validate({k: v for k, v in values.items() if v not in (None, "")})
