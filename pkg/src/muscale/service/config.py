"""Service configuration: flags beat environment variables beat defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any

from ..recognizer import RecognizerConfig

ENV_PORT = "MUSCALE_PORT"
ENV_DATA_DIR = "MUSCALE_DATA_DIR"
ENV_ZOOM_STEP = "MUSCALE_ZOOM_STEP"
ENV_EXPANSION = "MUSCALE_EXPANSION"

DEFAULT_PORT = 8040
DEFAULT_DATA_DIR = "./muscale-data"

MAX_DOCUMENT_BYTES = 10 * 1024 * 1024
MAX_DOCUMENT_ELEMENTS = 10_000


@dataclass(frozen=True)
class ServiceConfig:
    port: int = DEFAULT_PORT
    data_dir: str = DEFAULT_DATA_DIR
    zoom_step: float = RecognizerConfig.zoom_step
    expansion: float = RecognizerConfig.expansion_factor

    def recognizer_config(self) -> RecognizerConfig:
        return RecognizerConfig(zoom_step=self.zoom_step, expansion_factor=self.expansion)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "port": self.port,
            "dataDir": self.data_dir,
            "zoomStep": self.zoom_step,
            "expansion": self.expansion,
        }


def resolve_config(
    port: int | None = None,
    data_dir: str | None = None,
    zoom_step: float | None = None,
    expansion: float | None = None,
    env: dict[str, str] | None = None,
) -> ServiceConfig:
    """Merge explicit flag values over environment over defaults."""
    env = os.environ if env is None else env

    def pick(flag, env_key, default, cast):
        if flag is not None:
            return flag
        if env_key in env:
            return cast(env[env_key])
        return default

    return ServiceConfig(
        port=pick(port, ENV_PORT, DEFAULT_PORT, int),
        data_dir=pick(data_dir, ENV_DATA_DIR, DEFAULT_DATA_DIR, str),
        zoom_step=pick(zoom_step, ENV_ZOOM_STEP, RecognizerConfig.zoom_step, float),
        expansion=pick(expansion, ENV_EXPANSION, RecognizerConfig.expansion_factor, float),
    )
