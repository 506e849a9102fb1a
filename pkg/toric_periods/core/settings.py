"""
Runtime settings read from the environment.
"""
import os
from typing import Literal, Optional

from pydantic import BaseModel, Field


def _env_bool(value: Optional[str], default: bool) -> bool:
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    """Global options shared by the library, the CLI and the MCP server."""

    output_dir: str = "./toric_artifacts"
    scale_guard: int = Field(default=16, ge=1)
    order: int = Field(default=6, ge=1)
    max_parallel: int = Field(default=4, ge=1)
    allow_low_rank_hodge: bool = True
    log_level: str = "INFO"
    log_format: Literal["text", "json"] = "text"

    @classmethod
    def from_env(cls, **overrides) -> "Settings":
        """
        Build settings from TORIC_* environment variables.

        Args:
            **overrides: Values taking precedence over the environment (None is ignored)

        Returns:
            Validated Settings
        """
        values = {
            "output_dir": os.environ.get("TORIC_OUTPUT_DIR", "./toric_artifacts"),
            "scale_guard": int(os.environ.get("TORIC_SCALE_GUARD", "16")),
            "order": int(os.environ.get("TORIC_ORDER", "6")),
            "max_parallel": int(os.environ.get("TORIC_MAX_PARALLEL", "4")),
            "allow_low_rank_hodge": _env_bool(
                os.environ.get("TORIC_ALLOW_LOW_RANK_HODGE"), True
            ),
            "log_level": os.environ.get("TORIC_LOG_LEVEL", "INFO").upper(),
            "log_format": os.environ.get("TORIC_LOG_FORMAT", "text").lower(),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the process-wide settings with lazy initialization."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def set_settings(settings: Settings) -> None:
    global _settings
    _settings = settings
