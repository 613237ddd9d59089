import csv
import io
import json
import logging
import sys
from enum import StrEnum
from pathlib import Path
from typing import Any, NamedTuple, Optional

from cli.manifest import RunManifest, build_manifest, canonical_json
from shared.errors import UsageError


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"
    SCRIPT = "script"


class CommandOutput(NamedTuple):
    payload: bytes
    format: OutputFormat
    manifest: RunManifest


def number(value: Optional[float]) -> str:
    """shortest decimal that reads back to the same float; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def csv_output(subcommand: str, parameters: dict[str, Any], header: list[str], rows: list[list[Any]]) -> CommandOutput:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([number(v) if not isinstance(v, str) else v for v in row])

    payload = buffer.getvalue().encode()
    return CommandOutput(payload, OutputFormat.CSV, build_manifest(subcommand, parameters, payload))


def json_output(
    subcommand: str, parameters: dict[str, Any], result: dict[str, Any], seed: Optional[int] = None
) -> CommandOutput:
    manifest = build_manifest(subcommand, parameters, canonical_json(result), seed=seed)
    document = {"result": result, "manifest": manifest.model_dump(mode="json")}
    payload = (json.dumps(document, indent=2, sort_keys=True) + "\n").encode()
    return CommandOutput(payload, OutputFormat.JSON, manifest)


def script_output(subcommand: str, parameters: dict[str, Any], script: str) -> CommandOutput:
    payload = script.encode()
    return CommandOutput(payload, OutputFormat.SCRIPT, build_manifest(subcommand, parameters, payload))


def manifest_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".manifest.json")


def emit(output: CommandOutput, out_path: Optional[str]) -> None:
    """
    Write the payload to out_path or stdout. CSV and script payloads carry no
    manifest of their own, so it goes to a sidecar file or to stderr.

    Raises:
        UsageError: If the output path cannot be written.
    """
    manifest_bytes = (json.dumps(output.manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n").encode()

    if out_path is None:
        sys.stdout.write(output.payload.decode())
        sys.stdout.flush()
        if output.format is not OutputFormat.JSON:
            sys.stderr.write(manifest_bytes.decode())
        return

    path = Path(out_path)
    try:
        path.write_bytes(output.payload)
        if output.format is not OutputFormat.JSON:
            manifest_path(path).write_bytes(manifest_bytes)
    except OSError as e:
        raise UsageError(f"cannot write output {path}: {e}")

    logging.info(f"action: write_output | path: {path} | bytes: {len(output.payload)}")
