"""Runtime configuration for the cliffordklein toolkit."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

DEFAULT_MAX_SIGNATURE = 30
DEFAULT_MAX_REP_SIZE = 20
DEFAULT_WEYL_RANK_LIMIT = 9
DEFAULT_SEED = 0
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_CATALOG_PATH = str(Path(__file__).resolve().with_name("catalog_data.json"))


@dataclass(frozen=True)
class ToolkitConfig:
    max_signature: int = DEFAULT_MAX_SIGNATURE
    max_rep_size: int = DEFAULT_MAX_REP_SIZE
    weyl_rank_limit: int = DEFAULT_WEYL_RANK_LIMIT
    seed: int = DEFAULT_SEED
    catalog_path: str = DEFAULT_CATALOG_PATH
    log_level: str = DEFAULT_LOG_LEVEL

    @classmethod
    def from_env(cls) -> "ToolkitConfig":
        return cls(
            max_signature=int(os.getenv("CCK_MAX_SIGNATURE", str(DEFAULT_MAX_SIGNATURE))),
            max_rep_size=int(os.getenv("CCK_MAX_REP_SIZE", str(DEFAULT_MAX_REP_SIZE))),
            weyl_rank_limit=int(os.getenv("CCK_WEYL_RANK_LIMIT", str(DEFAULT_WEYL_RANK_LIMIT))),
            seed=int(os.getenv("CCK_SEED", str(DEFAULT_SEED))),
            catalog_path=os.getenv("CCK_CATALOG", DEFAULT_CATALOG_PATH),
            log_level=os.getenv("CCK_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
        )

    def with_overrides(self, **overrides: Optional[object]) -> "ToolkitConfig":
        """Return a copy with every non-None override applied."""

        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes)


_active_config: Optional[ToolkitConfig] = None


def get_config() -> ToolkitConfig:
    global _active_config
    if _active_config is None:
        _active_config = ToolkitConfig.from_env()
    return _active_config


def set_config(config: Optional[ToolkitConfig]) -> None:
    """Install ``config`` as the process-wide configuration (``None`` re-reads the env)."""

    global _active_config
    _active_config = config
