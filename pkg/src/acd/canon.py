"""Canonical JSON encoding shared by signatures, audit chaining, and the wire.

One object per line, keys sorted, compact separators, ASCII-only output.
Byte-identical rendering is part of the external contract, so every
component that hashes or signs an encoding goes through this helper.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def canonical_line(obj: Any) -> bytes:
    return canonical_json(obj).encode("ascii") + b"\n"
