"""Descriptive demand statistics: daily profiles, weekday/weekend splits,
load factor, monthly energy, and period-over-period generation deltas."""

from __future__ import annotations

import calendar
import json
from dataclasses import dataclass
from datetime import date

from .errors import (CoverageError, DivisionError, EmptyDataError,
                     ResolutionError, ValidationError)
from .series import LoadSeries, Resolution

HOURS_PER_DAY = 24

# Bangladesh weekly holidays (datetime.weekday() numbering: Fri=4, Sat=5).
DEFAULT_WEEKEND_DAYS = frozenset({4, 5})


@dataclass(frozen=True)
class DailyProfile:
    """Hour-of-day mean demand over one month."""

    month: int
    year: int
    hourly_means: tuple[float, ...]

    def __post_init__(self):
        if len(self.hourly_means) != HOURS_PER_DAY:
            raise ValidationError("a daily profile needs exactly 24 hourly means")


@dataclass(frozen=True)
class YearlyProfile:
    """Per-date mean demand over (a subset of) one year."""

    year: int
    daily_means: tuple[tuple[date, float], ...]

    def __post_init__(self):
        prev = None
        for day, _ in self.daily_means:
            if day.year != self.year:
                raise ValidationError(f"date {day.isoformat()} outside year {self.year}")
            if prev is not None and day <= prev:
                raise ValidationError("profile dates must be strictly increasing")
            prev = day

    def dates(self) -> list[date]:
        return [d for d, _ in self.daily_means]

    def values(self) -> list[float]:
        return [v for _, v in self.daily_means]


@dataclass(frozen=True)
class LoadFactorResult:
    start: date
    end: date
    average_load: float
    peak_load: float
    load_factor: float

    def __post_init__(self):
        if not 0.0 < self.load_factor <= 1.0:
            raise ValidationError("load factor must be in (0, 1]")
        if self.peak_load < self.average_load:
            raise ValidationError("peak load cannot be below the average")


@dataclass(frozen=True)
class GenerationDelta:
    """Signed energy change versus the same month of the previous year."""

    month: int
    year: int
    delta_gwh: float


def _observed(series: LoadSeries):
    return [r for r in series.records if not r.missing]


def hourly_average_profile(series: LoadSeries, month: int, year: int) -> DailyProfile:
    """Mean demand at each hour of day across one month of an hourly series."""
    if series.resolution is not Resolution.HOURLY:
        raise ResolutionError("hourly profiles need an hourly series")
    sums = [0.0] * HOURS_PER_DAY
    counts = [0] * HOURS_PER_DAY
    for record in _observed(series):
        ts = record.timestamp
        if ts.year == year and ts.month == month:
            sums[ts.hour] += record.demand
            counts[ts.hour] += 1
    for hour in range(HOURS_PER_DAY):
        if counts[hour] == 0:
            raise CoverageError(f"no observations at hour {hour} in {year}-{month:02d}")
    means = tuple(sums[h] / counts[h] for h in range(HOURS_PER_DAY))
    return DailyProfile(month=month, year=year, hourly_means=means)


def yearly_daily_average(series: LoadSeries, year: int) -> YearlyProfile:
    """Per-date mean of each complete day's 24 hourly demands."""
    if series.resolution is not Resolution.HOURLY:
        raise ResolutionError("daily averages need an hourly series")
    by_date: dict[date, list[float]] = {}
    for record in _observed(series):
        if record.timestamp.year == year:
            by_date.setdefault(record.timestamp.date(), []).append(record.demand)
    entries = tuple(
        (day, sum(vals) / HOURS_PER_DAY)
        for day, vals in sorted(by_date.items())
        if len(vals) == HOURS_PER_DAY
    )
    if not entries:
        raise EmptyDataError(f"no complete days in {year}")
    return YearlyProfile(year=year, daily_means=entries)


def weekday_weekend_split(
    profile: YearlyProfile,
    weekend_days: frozenset[int] = DEFAULT_WEEKEND_DAYS,
) -> tuple[YearlyProfile, YearlyProfile]:
    """Partition a yearly profile into (weekend, weekday) halves."""
    weekend = tuple(e for e in profile.daily_means if e[0].weekday() in weekend_days)
    weekday = tuple(e for e in profile.daily_means if e[0].weekday() not in weekend_days)
    return (YearlyProfile(year=profile.year, daily_means=weekend),
            YearlyProfile(year=profile.year, daily_means=weekday))


def load_factor(series: LoadSeries, start: date, end: date) -> LoadFactorResult:
    """Average-to-peak demand ratio over observations in [start, end]."""
    demands = [
        r.demand for r in _observed(series)
        if start <= r.timestamp.date() <= end
    ]
    if not demands:
        raise EmptyDataError(
            f"no observations between {start.isoformat()} and {end.isoformat()}")
    peak = max(demands)
    if peak <= 0.0:
        raise ValidationError("load factor needs a positive peak demand")
    if min(demands) <= 0.0:
        raise ValidationError("load factor needs strictly positive demands")
    average = sum(demands) / len(demands)
    return LoadFactorResult(start=start, end=end, average_load=average,
                            peak_load=peak, load_factor=average / peak)


def monthly_energy(series: LoadSeries, month: int, year: int) -> float:
    """Energy generated in one month, GWh (hourly MW values x 1 h / 1000).

    Requires every hour of the month to be observed.
    """
    if series.resolution is not Resolution.HOURLY:
        raise ResolutionError("monthly energy needs an hourly series")
    demands = [
        r.demand for r in _observed(series)
        if r.timestamp.year == year and r.timestamp.month == month
    ]
    expected = calendar.monthrange(year, month)[1] * HOURS_PER_DAY
    if len(demands) != expected:
        raise CoverageError(
            f"{year}-{month:02d} has {len(demands)} observed hours, needs {expected}")
    return sum(demands) / 1000.0


def generation_delta(this_year_gwh: float, prev_year_gwh: float,
                     month: int, year: int) -> GenerationDelta:
    """Signed GWh difference of one month versus the previous year's month."""
    for value in (this_year_gwh, prev_year_gwh):
        if not isinstance(value, (int, float)) or value != value:
            raise ValidationError("energies must be finite numbers")
    return GenerationDelta(month=month, year=year,
                           delta_gwh=this_year_gwh - prev_year_gwh)


def percent_change(current: float, reference: float) -> float:
    """100 * (current - reference) / reference."""
    if reference == 0.0:
        raise DivisionError("percent change against a zero reference is undefined")
    return 100.0 * (current - reference) / reference


def daily_profile_to_csv(profile: DailyProfile) -> str:
    lines = ["hour,mean_mw"]
    for hour, mean in enumerate(profile.hourly_means):
        lines.append(f"{hour},{mean!r}")
    return "\n".join(lines) + "\n"


def yearly_profile_to_csv(profile: YearlyProfile) -> str:
    lines = ["date,mean_mw"]
    for day, mean in profile.daily_means:
        lines.append(f"{day.isoformat()},{mean!r}")
    return "\n".join(lines) + "\n"


def profile_to_json(kind: str, period: str, pairs: list[tuple[str, float]]) -> str:
    """Shared ``{kind, period, values[]}`` document for external plotting."""
    doc = {
        "kind": kind,
        "period": period,
        "values": [{"key": key, "value": value} for key, value in pairs],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def daily_profile_to_json(profile: DailyProfile) -> str:
    return profile_to_json(
        "hourly_average_profile", f"{profile.year}-{profile.month:02d}",
        [(str(h), m) for h, m in enumerate(profile.hourly_means)])


def yearly_profile_to_json(profile: YearlyProfile) -> str:
    return profile_to_json(
        "yearly_daily_average", str(profile.year),
        [(d.isoformat(), m) for d, m in profile.daily_means])


def load_factor_to_json(result: LoadFactorResult) -> str:
    doc = {
        "kind": "load_factor",
        "period": f"{result.start.isoformat()}/{result.end.isoformat()}",
        "average_load_mw": result.average_load,
        "peak_load_mw": result.peak_load,
        "load_factor": result.load_factor,
    }
    return json.dumps(doc, indent=2, sort_keys=True)
