import json
import os
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from labeldist.appr.push import ApprConfig
from labeldist.nn.train import TrainConfig


def config_data(path) -> dict:
    with open(path) as config_file:
        config_data = json.load(config_file)

        return config_data


class Settings(BaseModel):
    """Defaults shared by every command. A JSON config file overrides them."""

    model_config = ConfigDict(extra="forbid")

    appr: ApprConfig = Field(default_factory=lambda: ApprConfig(alpha=0.1, epsilon=1e-5))
    train: TrainConfig = Field(default_factory=TrainConfig)
    emb_dim: int = Field(default=16, ge=0)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    cache_dir: Optional[str] = None
    log_level: str = "INFO"


def load_settings(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """
    Build settings from defaults, an optional JSON file and explicit overrides.

    Args:
        path: JSON config file, may be None
        overrides: nested dict applied on top of the file (CLI flags)

    Returns:
        Validated Settings
    """
    merged: Dict[str, Any] = config_data(path) if path else {}
    for key, value in (overrides or {}).items():
        if isinstance(value, dict):
            merged[key] = {**merged.get(key, {}), **value}
        else:
            merged[key] = value
    return Settings.model_validate(merged)
