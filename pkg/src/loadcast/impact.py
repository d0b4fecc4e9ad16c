"""Actual-versus-counterfactual demand comparison.

The forecast series plays the role of the no-event counterfactual. Gaps are
monthly percentage differences of mean demand computed over the dates both
series cover; the crossover date marks where actual demand catches back up
to the counterfactual after the deepest-gap month.
"""

from __future__ import annotations

import calendar
import json
from dataclasses import dataclass
from datetime import date

from .errors import (CoverageError, ParseError, ResolutionError,
                     ValidationError)
from .series import LoadSeries, Resolution

IMPACT_CSV_HEADER = "month,actual_mean_mw,forecast_mean_mw,gap_percent,full_coverage"

# A month counts as fully covered when at least this share of its calendar
# days appears in both series.
FULL_COVERAGE_FRACTION = 0.9


@dataclass(frozen=True)
class MonthGap:
    """One month's actual-vs-counterfactual comparison."""

    year: int
    month: int
    actual_mean: float
    forecast_mean: float
    gap_percent: float
    full_coverage: bool

    @property
    def label(self) -> str:
        return f"{self.year}-{self.month:02d}"


@dataclass(frozen=True)
class ImpactReport:
    months: tuple[MonthGap, ...]
    crossover_date: date | None

    def __post_init__(self):
        prev = None
        for row in self.months:
            key = (row.year, row.month)
            if prev is not None and key <= prev:
                raise ValidationError("months must be strictly increasing")
            prev = key


def _daily_map(series: LoadSeries, name: str) -> dict[date, float]:
    if series.resolution is not Resolution.DAILY:
        raise ResolutionError(f"{name} series must be daily")
    return {
        r.timestamp.date(): r.demand for r in series.records if not r.missing
    }


def _months_in_window(start: date, end: date) -> list[tuple[int, int]]:
    months = []
    year, month = start.year, start.month
    while (year, month) <= (end.year, end.month):
        months.append((year, month))
        month += 1
        if month == 13:
            month, year = 1, year + 1
    return months


def counterfactual_gap(actual: LoadSeries, forecast: LoadSeries,
                       start: date, end: date) -> ImpactReport:
    """Monthly mean gaps between actual and forecast over [start, end].

    Means for each month use only dates present in both series; months whose
    shared coverage falls below 90% of their calendar days are flagged via
    ``full_coverage=False`` rather than dropped. The crossover date is the
    first date, from the start of the deepest-gap month onward, where actual
    demand reaches the forecast.
    """
    if end < start:
        raise ValidationError(f"end {end.isoformat()} precedes start {start.isoformat()}")
    actual_by_date = _daily_map(actual, "actual")
    forecast_by_date = _daily_map(forecast, "forecast")

    shared = sorted(
        d for d in actual_by_date
        if d in forecast_by_date and start <= d <= end
    )
    if not shared:
        raise CoverageError(
            "actual and forecast series share no dates inside the window")

    by_month: dict[tuple[int, int], list[date]] = {}
    for d in shared:
        by_month.setdefault((d.year, d.month), []).append(d)

    rows = []
    for year, month in _months_in_window(start, end):
        dates = by_month.get((year, month))
        if not dates:
            raise CoverageError(f"no shared coverage in {year}-{month:02d}")
        actual_mean = sum(actual_by_date[d] for d in dates) / len(dates)
        forecast_mean = sum(forecast_by_date[d] for d in dates) / len(dates)
        if forecast_mean <= 0:
            raise ValidationError(
                f"forecast mean for {year}-{month:02d} is not positive")
        gap = 100.0 * (actual_mean - forecast_mean) / forecast_mean
        days_in_month = calendar.monthrange(year, month)[1]
        first = max(date(year, month, 1), start)
        last = min(date(year, month, days_in_month), end)
        window_days = (last - first).days + 1
        rows.append(MonthGap(
            year=year, month=month, actual_mean=actual_mean,
            forecast_mean=forecast_mean, gap_percent=gap,
            full_coverage=len(dates) >= FULL_COVERAGE_FRACTION * window_days))

    deepest = min(rows, key=lambda r: r.gap_percent)
    search_from = date(deepest.year, deepest.month, 1)
    crossover = None
    for d in shared:
        if d >= search_from and actual_by_date[d] >= forecast_by_date[d]:
            crossover = d
            break
    return ImpactReport(months=tuple(rows), crossover_date=crossover)


def render_report_csv(report: ImpactReport) -> str:
    """Full-precision CSV, one row per month (values round-trip exactly)."""
    lines = [IMPACT_CSV_HEADER]
    for row in report.months:
        lines.append(
            f"{row.label},{row.actual_mean!r},{row.forecast_mean!r},"
            f"{row.gap_percent!r},{int(row.full_coverage)}")
    return "\n".join(lines) + "\n"


def parse_report_csv(text: str) -> ImpactReport:
    """Inverse of :func:`render_report_csv` (crossover is not stored in CSV)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != IMPACT_CSV_HEADER:
        raise ParseError(f"expected header {IMPACT_CSV_HEADER!r}", line=1)
    months = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"expected 5 fields, got {len(parts)}", line=lineno)
        try:
            year_s, month_s = parts[0].split("-")
            months.append(MonthGap(
                year=int(year_s), month=int(month_s),
                actual_mean=float(parts[1]), forecast_mean=float(parts[2]),
                gap_percent=float(parts[3]), full_coverage=bool(int(parts[4]))))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return ImpactReport(months=tuple(months), crossover_date=None)


def render_report_json(report: ImpactReport) -> str:
    doc = {
        "months": [
            {
                "month": row.label,
                "actual_mean_mw": row.actual_mean,
                "forecast_mean_mw": row.forecast_mean,
                "gap_percent": row.gap_percent,
                "full_coverage": row.full_coverage,
            }
            for row in report.months
        ],
        "crossover_date": (report.crossover_date.isoformat()
                           if report.crossover_date else None),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def render_report_text(report: ImpactReport) -> str:
    """Plain-text summary table, values at 2 decimals."""
    header = f"{'month':<9}{'actual MW':>12}{'forecast MW':>13}{'gap %':>9}  coverage"
    lines = [header, "-" * len(header)]
    for row in report.months:
        flag = "full" if row.full_coverage else "PARTIAL"
        lines.append(
            f"{row.label:<9}{row.actual_mean:>12.2f}{row.forecast_mean:>13.2f}"
            f"{row.gap_percent:>9.2f}  {flag}")
    if report.crossover_date is not None:
        lines.append(f"actual demand reaches the forecast on "
                     f"{report.crossover_date.isoformat()}")
    else:
        lines.append("actual demand never reaches the forecast in the window")
    return "\n".join(lines) + "\n"
