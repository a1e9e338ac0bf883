#!/usr/bin/env python3
"""
Emit records as json lines, csv or plain text
"""

import csv
import json
from typing import Any, Dict, List, Sequence, TextIO

from app.models.schemas import OutputFormat

PLAIN_WIDTH = 60


def _abbreviate(value: Any) -> str:
    text = "" if value is None else str(value)
    if len(text) > PLAIN_WIDTH:
        return f"{text[:24]}...({len(text)} chars)"
    return text


def _csv_cell(value: Any) -> Any:
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return value


class RecordWriter:
    """Writes a stream of flat records in one output format"""

    def __init__(self, stream: TextIO, output_format: OutputFormat, fields: Sequence[str]):
        self.stream = stream
        self.output_format = OutputFormat(output_format)
        self.fields = list(fields)
        self.written: List[Dict[str, Any]] = []
        self._csv = None

    def write(self, record: Dict[str, Any], display: Dict[str, Any] = None) -> None:
        """``display`` adds human-oriented fields to plain output only."""
        self.written.append(record)
        if display and self.output_format is OutputFormat.PLAIN:
            record = {**record, **display}
        if self.output_format is OutputFormat.JSON:
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")
        elif self.output_format is OutputFormat.CSV:
            if self._csv is None:
                self._csv = csv.DictWriter(self.stream, fieldnames=self.fields, extrasaction="ignore",
                                           lineterminator="\n")
                self._csv.writeheader()
            self._csv.writerow({key: _csv_cell(record.get(key)) for key in self.fields})
        else:
            self.stream.write("  ".join(f"{key}={_abbreviate(record.get(key))}" for key in self.fields) + "\n")
        self.stream.flush()

    def summary(self, line: str) -> None:
        """Free-text trailer; plain format only, so json and csv stay machine-readable."""
        if self.output_format is OutputFormat.PLAIN:
            self.stream.write(line + "\n")
