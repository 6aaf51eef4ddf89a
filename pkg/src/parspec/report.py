"""Run manifests, JSON encoding and seeded randomness for command outputs."""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from . import __version__

SCHEMA_VERSION = "1.0"
COMMANDS = ("validate", "uci", "spectrum", "basin", "audit")


def encode(obj: Any) -> Any:
    """Convert results to JSON-ready values; complex numbers become ``{"re", "im"}``."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _finite(obj.real), "im": _finite(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    return obj


def _finite(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    # normalise -0.0 so byte output does not depend on signed zeros
    return x + 0.0


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(encode(doc), indent=2, allow_nan=False) + "\n"


def decode_complex(d: Dict[str, float]) -> complex:
    return complex(d["re"], d["im"])


@dataclass
class RunManifest:
    command: str
    parameters: Dict[str, str] = field(default_factory=dict)
    seed: int = 0
    tool_version: str = __version__
    timestamp: str = ""

    def __post_init__(self):
        self.parameters = {k: str(v) for k, v in sorted(self.parameters.items())}
        if not self.timestamp:
            epoch = os.environ.get("SOURCE_DATE_EPOCH")
            when = (datetime.fromtimestamp(int(epoch), timezone.utc) if epoch
                    else datetime.now(timezone.utc))
            self.timestamp = when.replace(microsecond=0).isoformat()

    def reproducible(self) -> Dict[str, Any]:
        """Everything that determines the outputs (the timestamp does not)."""
        return {"command": self.command, "parameters": self.parameters,
                "seed": self.seed, "tool_version": self.tool_version}

    def full(self) -> Dict[str, Any]:
        d = self.reproducible()
        d["timestamp"] = self.timestamp
        return d


def envelope(manifest: RunManifest, body: Dict[str, Any]) -> Dict[str, Any]:
    doc = {"schema_version": SCHEMA_VERSION, "command": manifest.command,
           "manifest": manifest.reproducible()}
    doc.update(body)
    return doc


def write_outputs(out_dir: Path, manifest: RunManifest, files: Dict[str, str]) -> List[Path]:
    """Write named text outputs plus ``manifest.json``; returns the paths written."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        p = out_dir / name
        p.write_text(text)
        written.append(p)
    mp = out_dir / "manifest.json"
    mp.write_text(json.dumps(manifest.full(), indent=2) + "\n")
    written.append(mp)
    return written


def generators(seed: int, n: int) -> List[np.random.Generator]:
    """Independent counter-based (Philox) streams split from one 64-bit seed."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def load_schema(command: str) -> Dict[str, Any]:
    if command not in COMMANDS:
        raise ValueError(f"no schema for {command!r}")
    text = resources.files("parspec").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)
