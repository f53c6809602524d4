"""Shared JSON helpers: canonical dumps, atomic writes, point keys.

Every command's output must be byte-identical across reruns with the same
seed, so all serialization goes through `dumps_canonical` (sorted keys,
fixed separators) and files land via write-temp-then-rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import ValidationError
from .lattice import Point, as_point


def point_key(p: Point) -> str:
    """Compact string form of a point, usable as a JSON object key."""
    return ",".join(str(c) for c in p)


def parse_point_key(key: str) -> Point:
    try:
        return as_point(int(c) for c in key.split(","))
    except ValueError as exc:
        raise ValidationError(f"malformed point key: {key!r}") from exc


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path: str | Path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from exc
