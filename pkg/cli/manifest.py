import hashlib
import json
from enum import Enum
from typing import Any, Optional

from sdof import __version__
from shared.entity import Message


class RunManifest(Message):
    """Everything needed to re-run a subcommand and check its output."""

    subcommand: str
    parameters: dict[str, Any]
    seed: Optional[int] = None
    version: str = __version__
    checksum: str


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def canonical_json(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def build_manifest(subcommand: str, parameters: dict[str, Any], output: bytes, seed: Optional[int] = None) -> RunManifest:
    return RunManifest(
        subcommand=subcommand,
        parameters={name: _plain(value) for name, value in parameters.items()},
        seed=seed,
        checksum=sha256_hex(output),
    )


def _plain(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    return value
