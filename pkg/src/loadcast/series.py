"""Hourly/daily load series: the universal input type and its cleaning ops.

A :class:`LoadSeries` is an immutable, strictly increasing, uniformly spaced
sequence of demand observations in MW. Gaps are represented by explicit
records with ``demand=None`` so that the grid stays uniform; absent rows are
rejected rather than silently tolerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from enum import Enum

from .errors import (
    BoundaryError,
    DuplicateTimestampError,
    EmptyDataError,
    ParseError,
    ResolutionError,
    ValidationError,
)

CSV_HEADER = "timestamp,demand_mw"
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"

# Linear interpolation over longer outages fabricates structure, so gaps
# spanning more than this many hours are rejected.
MAX_INTERPOLATION_GAP_HOURS = 72


class Resolution(Enum):
    HOURLY = "hourly"
    DAILY = "daily"

    @property
    def step(self) -> timedelta:
        return timedelta(hours=1) if self is Resolution.HOURLY else timedelta(days=1)


@dataclass(frozen=True)
class LoadRecord:
    """One demand observation (MW) on the hourly grid; ``None`` marks missing."""

    timestamp: datetime
    demand: float | None

    def __post_init__(self):
        ts = self.timestamp
        if ts.minute != 0 or ts.second != 0 or ts.microsecond != 0:
            raise ValidationError(f"timestamp {ts.isoformat()} is not on the hourly grid")
        if self.demand is not None:
            if not math.isfinite(self.demand):
                raise ValidationError(f"demand at {ts.isoformat()} is not finite")
            if self.demand < 0:
                raise ValidationError(f"demand at {ts.isoformat()} is negative")

    @property
    def missing(self) -> bool:
        return self.demand is None


@dataclass(frozen=True)
class LoadSeries:
    """Uniformly spaced demand series at a declared resolution."""

    records: tuple[LoadRecord, ...]
    resolution: Resolution

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        step = self.resolution.step
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.timestamp <= prev.timestamp:
                raise ValidationError(
                    f"timestamps not strictly increasing at {cur.timestamp.isoformat()}"
                )
            if cur.timestamp - prev.timestamp != step:
                raise ValidationError(
                    f"gap between {prev.timestamp.isoformat()} and "
                    f"{cur.timestamp.isoformat()} breaks the {self.resolution.value} grid"
                )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def missing_count(self) -> int:
        return sum(1 for r in self.records if r.missing)

    def demands(self) -> list[float | None]:
        return [r.demand for r in self.records]

    def timestamps(self) -> list[datetime]:
        return [r.timestamp for r in self.records]


def _parse_timestamp(field: str, line: int) -> datetime:
    try:
        ts = datetime.strptime(field, TIMESTAMP_FORMAT)
    except ValueError:
        raise ParseError(f"malformed timestamp {field!r}", line=line) from None
    if ts.minute != 0:
        raise ParseError(f"timestamp {field!r} is not on the hourly grid", line=line)
    return ts


def _parse_demand(field: str, line: int) -> float | None:
    if field == "":
        return None
    try:
        value = float(field)
    except ValueError:
        raise ParseError(f"malformed demand {field!r}", line=line) from None
    if not math.isfinite(value):
        raise ValidationError(f"line {line}: demand {field!r} is not finite")
    if value < 0:
        raise ValidationError(f"line {line}: demand {value} is negative")
    return value


def _infer_resolution(timestamps: list[datetime]) -> Resolution:
    if len(timestamps) < 2:
        return Resolution.HOURLY
    delta = timestamps[1] - timestamps[0]
    if delta == timedelta(days=1):
        return Resolution.DAILY
    return Resolution.HOURLY


def parse_load_csv(text: str, resolution: Resolution | None = None) -> LoadSeries:
    """Parse a ``timestamp,demand_mw`` document into a sorted LoadSeries.

    Empty demand fields become missing markers. Duplicated timestamps,
    malformed fields, and rows breaking the uniform grid are rejected.
    When ``resolution`` is None it is inferred from the row spacing.
    """
    lines = text.lstrip("﻿").splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER!r}", line=1)

    rows: list[tuple[datetime, float | None, int]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped:
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", line=lineno)
        ts = _parse_timestamp(parts[0].strip(), lineno)
        demand = _parse_demand(parts[1].strip(), lineno)
        rows.append((ts, demand, lineno))

    rows.sort(key=lambda row: row[0])
    for (ts_a, _, _), (ts_b, _, line_b) in zip(rows, rows[1:]):
        if ts_a == ts_b:
            raise DuplicateTimestampError(
                f"line {line_b}: duplicate timestamp {ts_b.isoformat()}"
            )

    records = tuple(LoadRecord(ts, demand) for ts, demand, _ in rows)
    if resolution is None:
        resolution = _infer_resolution([r.timestamp for r in records])
    return LoadSeries(records, resolution)


def serialize_load_csv(series: LoadSeries) -> str:
    """Render a series back to the CSV schema. Round-trips exactly."""
    lines = [CSV_HEADER]
    for record in series.records:
        demand = "" if record.demand is None else repr(record.demand)
        lines.append(f"{record.timestamp.strftime(TIMESTAMP_FORMAT)},{demand}")
    return "\n".join(lines) + "\n"


def interpolate_missing(series: LoadSeries) -> LoadSeries:
    """Fill missing demands by linear interpolation between their neighbors.

    The first and last records must be observed, and no missing run may
    span more than MAX_INTERPOLATION_GAP_HOURS.
    """
    if len(series) == 0 or all(r.missing for r in series.records):
        raise EmptyDataError("series has no observed demand to interpolate from")
    if series.records[0].missing or series.records[-1].missing:
        raise BoundaryError("missing demand at a series boundary cannot be interpolated")

    step_hours = series.resolution.step.total_seconds() / 3600.0
    demands = [r.demand for r in series.records]
    observed = [idx for idx, d in enumerate(demands) if d is not None]

    for left, right in zip(observed, observed[1:]):
        run = right - left - 1
        if run == 0:
            continue
        if run * step_hours > MAX_INTERPOLATION_GAP_HOURS:
            start = series.records[left + 1].timestamp
            raise ValidationError(
                f"missing run of {run * step_hours:.0f} hours starting "
                f"{start.isoformat()} exceeds the {MAX_INTERPOLATION_GAP_HOURS}h limit"
            )
        lo, hi = demands[left], demands[right]
        for idx in range(left + 1, right):
            frac = (idx - left) / (right - left)
            demands[idx] = lo + (hi - lo) * frac

    records = tuple(
        LoadRecord(r.timestamp, d) for r, d in zip(series.records, demands)
    )
    return LoadSeries(records, series.resolution)


def resample_daily(series: LoadSeries) -> LoadSeries:
    """Average a gap-free hourly series to one record per complete day."""
    if series.resolution is not Resolution.DAILY and series.resolution is not Resolution.HOURLY:
        raise ResolutionError(f"unsupported resolution {series.resolution}")
    if series.resolution is not Resolution.HOURLY:
        raise ResolutionError("resample_daily requires an hourly series")
    if series.missing_count:
        raise ValidationError(
            f"series has {series.missing_count} missing demand(s); interpolate first"
        )

    by_day: dict[date, list[float]] = {}
    for record in series.records:
        by_day.setdefault(record.timestamp.date(), []).append(record.demand)

    records = tuple(
        LoadRecord(datetime(day.year, day.month, day.day), sum(values) / 24.0)
        for day, values in sorted(by_day.items())
        if len(values) == 24
    )
    return LoadSeries(records, Resolution.DAILY)
