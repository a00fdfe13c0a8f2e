"""Writes run results to disk.

CSV files always have a header row, '.' as decimal separator and '\\n' line
endings. Tables can also be written as JSON lists of row objects.
"""

import csv
import json
import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction
from os import makedirs, path
from typing import Any, Literal

from pydantic import BaseModel

from mixedurn.model import Histogram, ReplicateSummary

logger = logging.getLogger(__name__)


def output_dir(out: str) -> str:
    """Create the output directory if needed and return it."""
    makedirs(out, exist_ok=True)
    return out


def _cell(value: Any) -> Any:
    # rational probabilities stay exact as "num/den"
    if isinstance(value, Fraction):
        return str(value)
    return value


def write_csv(file: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    with open(file, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.info(f"wrote {file}")
    return file


def write_json(file: str, payload: BaseModel | dict | list) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    with open(file, "w") as f:
        json.dump(payload, f, indent=4)
        f.write("\n")
    logger.info(f"wrote {file}")
    return file


def write_table(
    out: str,
    stem: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: Literal["csv", "json"] = "csv",
) -> str:
    """Write `rows` as out/stem.csv, or as out/stem.json when fmt is json."""
    if fmt == "json":
        records = [
            {column: _cell(value) for column, value in zip(columns, row)}
            for row in rows
        ]
        return write_json(path.join(out, f"{stem}.json"), records)
    return write_csv(path.join(out, f"{stem}.csv"), columns, rows)


def histogram_rows(n: int, histogram: Histogram) -> Iterable[tuple[Any, ...]]:
    """(checkpoint_n, bin_index, bin_left, bin_right, count) rows."""
    for index, count in enumerate(histogram.counts):
        left, right = histogram.edges(index)
        yield n, index, left, right, count


def summary_histogram_rows(summary: ReplicateSummary) -> Iterable[tuple[Any, ...]]:
    for checkpoint in summary.per_checkpoint:
        yield from histogram_rows(checkpoint.n, checkpoint.histogram)
