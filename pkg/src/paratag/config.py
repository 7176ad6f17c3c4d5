"""Service configuration from a JSON file with environment overrides.

Environment variables use the PARATAG_ prefix and win over the file:
PARATAG_HOST, PARATAG_PORT, PARATAG_DATA_DIR, PARATAG_CLAIM_LEASE_SECONDS,
PARATAG_DOUBLE_ANNOTATION, PARATAG_SHUFFLE_QUEUE. The annotator registry
(id to bearer token) can only come from the file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

_TRUTHY = {"1", "true", "yes", "on"}
_FALSY = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    data_dir: str = ":memory:"
    claim_lease_seconds: float = 1800.0
    double_annotation: bool = False
    shuffle_queue: bool = False
    annotators: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.port < 1 or self.port > 65535:
            raise ValueError("port must be in 1..65535")
        if self.claim_lease_seconds <= 0:
            raise ValueError("claim_lease_seconds must be positive")

    @property
    def required_annotators(self) -> int:
        return 2 if self.double_annotation else 1

    def store_path(self) -> str:
        """Location of the embedded store; creates the data directory."""
        if self.data_dir == ":memory:":
            return ":memory:"
        os.makedirs(self.data_dir, exist_ok=True)
        return os.path.join(self.data_dir, "corpus.sqlite3")


def _parse_bool(raw: str, name: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _TRUTHY:
        return True
    if lowered in _FALSY:
        return False
    raise ValueError(f"{name} must be a boolean, got {raw!r}")


def load_config(
    path: Optional[str] = None, env: Optional[Mapping[str, str]] = None
) -> ServiceConfig:
    """Read the JSON config file (if any), then apply PARATAG_* overrides."""
    env = os.environ if env is None else env
    if path is None:
        path = env.get("PARATAG_CONFIG")

    config = ServiceConfig()
    if path:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = {
            "host",
            "port",
            "data_dir",
            "claim_lease_seconds",
            "double_annotation",
            "shuffle_queue",
            "annotators",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        config = replace(config, **data)

    if "PARATAG_HOST" in env:
        config = replace(config, host=env["PARATAG_HOST"])
    if "PARATAG_PORT" in env:
        config = replace(config, port=int(env["PARATAG_PORT"]))
    if "PARATAG_DATA_DIR" in env:
        config = replace(config, data_dir=env["PARATAG_DATA_DIR"])
    if "PARATAG_CLAIM_LEASE_SECONDS" in env:
        config = replace(
            config, claim_lease_seconds=float(env["PARATAG_CLAIM_LEASE_SECONDS"])
        )
    if "PARATAG_DOUBLE_ANNOTATION" in env:
        config = replace(
            config,
            double_annotation=_parse_bool(
                env["PARATAG_DOUBLE_ANNOTATION"], "PARATAG_DOUBLE_ANNOTATION"
            ),
        )
    if "PARATAG_SHUFFLE_QUEUE" in env:
        config = replace(
            config,
            shuffle_queue=_parse_bool(
                env["PARATAG_SHUFFLE_QUEUE"], "PARATAG_SHUFFLE_QUEUE"
            ),
        )
    return config
