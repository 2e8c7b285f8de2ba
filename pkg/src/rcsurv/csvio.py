"""Reading and writing the ``time,status`` CSV format."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import TextIO

from .core import CensoredSample, validate_sample
from .errors import EmptySample, ValidationError

SAMPLE_HEADER = ("time", "status")


def format_number(x) -> str:
    """Shortest decimal string that parses back to the same double."""
    return repr(float(x))


def parse_sample(stream: TextIO) -> CensoredSample:
    """Parse CSV text with header ``time,status`` into a validated sample.

    Row indices in errors count data rows from zero, matching the indices
    reported by :func:`~rcsurv.core.validate_sample`.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise EmptySample()
    if tuple(h.strip().lower() for h in header) != SAMPLE_HEADER:
        raise ValidationError(f"expected header 'time,status', got {','.join(header)!r}")
    raw = []
    for index, row in enumerate(r for r in reader if any(cell.strip() for cell in r)):
        if len(row) != 2:
            raise ValidationError(f"expected 2 columns, got {len(row)}", index)
        try:
            time = float(row[0])
        except ValueError:
            raise ValidationError(f"time {row[0]!r} is not a decimal number", index) from None
        try:
            status = int(row[1])
        except ValueError:
            raise ValidationError(f"status {row[1]!r} is not an integer", index) from None
        raw.append((time, status))
    return validate_sample(raw)


def read_sample(path) -> CensoredSample:
    with open(path, newline="") as fh:
        return parse_sample(fh)


def sample_to_csv(sample: CensoredSample) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SAMPLE_HEADER)
    for obs in sample:
        writer.writerow((format_number(obs.time), obs.status))
    return buf.getvalue()


def write_sample(sample: CensoredSample, path) -> None:
    Path(path).write_text(sample_to_csv(sample))
