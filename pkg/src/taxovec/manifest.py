"""Run manifests.

Every CLI run writes a line-oriented key=value record of its resolved
configuration, input file digests, seed, artifact version, and wall time.
Deterministic subcommands are pure functions of their manifest: feeding
the same inputs and seed back reproduces the outputs byte for byte.
"""

from __future__ import annotations

import hashlib
from importlib import metadata
from pathlib import Path
from typing import Mapping

from .errors import DataError


def artifact_version() -> str:
    try:
        return metadata.version("taxovec")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    path: str | Path,
    subcommand: str,
    config: Mapping[str, object],
    inputs: Mapping[str, str | Path],
    seed: int | None,
    wall_time_s: float,
) -> None:
    """Write the manifest; config and input keys are emitted sorted."""
    lines = [
        f"subcommand={subcommand}",
        f"version={artifact_version()}",
        f"seed={'-' if seed is None else seed}",
        f"wall_time_s={wall_time_s:.3f}",
    ]
    for name in sorted(inputs):
        p = Path(inputs[name])
        lines.append(f"input.{name}.path={p}")
        lines.append(f"input.{name}.sha256={file_digest(p)}")
    for key in sorted(config):
        lines.append(f"config.{key}={config[key]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> dict[str, str]:
    p = Path(path)
    out: dict[str, str] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if "=" not in line:
            raise DataError(f"{p}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        out[key] = value
    return out
