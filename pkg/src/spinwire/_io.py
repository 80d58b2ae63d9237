"""Number formatting and atomic file output."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path


def format_float(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
