"""Run manifests: the resolved configuration that reproduces an output dir."""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone

from . import __version__

MANIFEST_NAME = "manifest.json"


def write_manifest(out_dir: str, command: str, config: dict) -> str:
    """Write manifest.json into ``out_dir`` and return its path.

    The manifest carries the fully resolved configuration, the package
    version, and a timestamp; rerunning the named command with this
    configuration reproduces every other file in the directory.
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, MANIFEST_NAME)
    payload = {
        "command": command,
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config": config,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_manifest(out_dir: str) -> dict:
    with open(os.path.join(out_dir, MANIFEST_NAME)) as fh:
        return json.load(fh)
