"""Run manifests: what ran, on which inputs, producing which outputs.

Every CLI run writes a manifest recording the tool version, the
resolved configuration, SHA-256 digests of the exact bytes of every
input file, the output file list, the master seed, and the wall-clock
duration.  Data CSVs are a pure function of the manifest's inputs;
only the duration field varies between identical runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

TOOL_VERSION = "0.1.0"

MANIFEST_FILENAME = "manifest.json"


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Provenance record for one CLI run."""

    subcommand: str
    config: dict
    master_seed: int
    tool_version: str = TOOL_VERSION
    input_digests: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    duration_s: float = 0.0

    def add_input(self, path: str | Path) -> None:
        self.input_digests[str(path)] = sha256_file(path)

    def add_output(self, path: str | Path) -> None:
        self.outputs.append(str(path))

    def write(self, out_dir: str | Path) -> Path:
        out = Path(out_dir) / MANIFEST_FILENAME
        out.parent.mkdir(parents=True, exist_ok=True)
        body = {
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "config": self.config,
            "input_sha256": self.input_digests,
            "outputs": self.outputs,
            "duration_s": self.duration_s,
            "master_seed": self.master_seed,
        }
        with open(out, "w") as fh:
            json.dump(body, fh, indent=2, sort_keys=False)
            fh.write("\n")
        return out
