"""Run manifests: record how outputs were produced and checksum them."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ._version import __version__

MANIFEST_NAME = "manifest.json"


def file_digest64(path) -> str:
    """First 64 bits of the file's SHA-256, as 16 hex characters."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()[:16]


@dataclass
class RunManifest:
    """Provenance for one CLI run; `outputs` maps relative paths to digests."""

    command: list[str]
    seed: str  # recorded verbatim as given on the command line
    parameters: dict
    started_at: str
    finished_at: str
    outputs: dict[str, str]
    tool: str = "mstlab"
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def write_manifest(manifest: RunManifest, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(manifest.to_json())


def load_manifest(path) -> RunManifest:
    with open(path) as fh:
        data = json.load(fh)
    known = {f for f in RunManifest.__dataclass_fields__}
    return RunManifest(**{k: v for k, v in data.items() if k in known})


def verify_outputs(manifest_path) -> list[tuple[str, str, str | None]]:
    """Recompute digests for every recorded output.

    Returns (relative path, expected digest, actual digest or None if the
    file is missing) per output.
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    base = manifest_path.parent
    results = []
    for rel, expected in sorted(manifest.outputs.items()):
        target = base / rel
        actual = file_digest64(target) if target.is_file() else None
        results.append((rel, expected, actual))
    return results
