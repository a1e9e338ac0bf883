#!/usr/bin/env python3
"""
File utility functions
"""

import json
import os
from typing import Any, Dict, Iterable


def append_ndjson(path: str, records: Iterable[Dict[str, Any]]) -> int:
    """Append records to ``path``, one JSON object per line. Returns the count written."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, "a", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
            count += 1
    return count


def read_ndjson(path: str):
    """Records previously written by append_ndjson."""
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
