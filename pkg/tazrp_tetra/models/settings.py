from typing import Optional

from pydantic import BaseSettings, Field


class Settings(BaseSettings):
    """Runtime configuration, read from `TAZRP_*` environment variables."""
    workers: int = Field(1, ge=1)
    exploration_bound: int = Field(64, ge=1)
    stability_start: Optional[int] = Field(None, ge=0)
    stability_limit: int = Field(24, ge=1)
    log_level: str = 'WARNING'

    class Config:
        env_prefix = 'TAZRP_'
