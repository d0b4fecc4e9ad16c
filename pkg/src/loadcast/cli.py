"""Command-line entry point.

Exit codes: 0 success, 1 validation/coverage/data errors, 2 I/O and parse
errors (including malformed input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from . import analytics, emissions, impact
from .config import ToolkitConfig, load_config
from .errors import LoadcastError, ParseError, ValidationError
from .lstm.backend import KERNEL_BACKEND
from .pipeline import (fit_forecaster, forecast_ensemble, load_forecaster,
                       save_forecaster)
from .series import (Resolution, interpolate_missing, parse_load_csv,
                     resample_daily, serialize_load_csv)


def _parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise ValidationError(f"bad date {text!r}, expected YYYY-MM-DD") from None


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)
    return target


def _load_series(path: str):
    return parse_load_csv(_read_text(path))


def _load_daily(path: str):
    series = _load_series(path)
    if series.resolution is not Resolution.DAILY:
        raise ValidationError(
            f"{path} is not a daily series; run `loadcast ingest --resample-daily` first")
    return series


def _cmd_ingest(args, config: ToolkitConfig, out_dir: Path) -> int:
    series = _load_series(args.input)
    if args.interpolate:
        series = interpolate_missing(series)
    if args.resample_daily:
        if args.interpolate is False and series.missing_count:
            series = interpolate_missing(series)
        series = resample_daily(series)
    target = _write_text(out_dir, "ingested.csv", serialize_load_csv(series))
    print(f"ingested {len(series)} {series.resolution.value} records "
          f"({series.missing_count} missing) -> {target}")
    return 0


def _cmd_train(args, config: ToolkitConfig, out_dir: Path) -> int:
    series = _load_daily(args.input)
    train_end = _parse_date(args.train_end) if args.train_end else None
    forecaster, candidates = fit_forecaster(
        series, config.train,
        lookback=config.lookback, train_end=train_end,
        val_fraction=config.val_fraction, hidden_sizes=config.hidden_sizes,
        dropout_rate=config.dropout_rate, n_candidates=config.n_candidates,
        ensemble_size=config.ensemble_size, holdout_days=config.holdout_days)
    model_path = out_dir / "model.json"
    out_dir.mkdir(parents=True, exist_ok=True)
    save_forecaster(forecaster, model_path)
    best = min(candidates, key=lambda c: c.score)
    _write_text(out_dir, "train_report.csv", best.report.to_csv())
    kind = "closed-loop RMSE" if config.holdout_days else "val MSE"
    print(f"trained {len(candidates)} candidate(s) on {KERNEL_BACKEND} kernels, "
          f"kept {len(forecaster.members)}; best {kind} {best.score:.4f} "
          f"(seed {best.seed}) -> {model_path}")
    return 0


def _cmd_forecast(args, config: ToolkitConfig, out_dir: Path) -> int:
    forecaster = load_forecaster(args.model)
    history = _load_daily(args.input)
    start = _parse_date(args.start)
    end = _parse_date(args.end)
    result = forecast_ensemble(forecaster, history, start, end)
    target = _write_text(out_dir, "forecast.csv", serialize_load_csv(result))
    print(f"forecast {len(result)} days ({start.isoformat()}..{end.isoformat()}) "
          f"-> {target}")
    return 0


def _cmd_analyze(args, config: ToolkitConfig, out_dir: Path) -> int:
    series = _load_series(args.input)
    kind = args.kind
    if kind == "hourly-profile":
        profile = analytics.hourly_average_profile(series, args.month, args.year)
        _write_text(out_dir, "hourly_profile.csv",
                    analytics.daily_profile_to_csv(profile))
        _write_text(out_dir, "hourly_profile.json",
                    analytics.daily_profile_to_json(profile))
        print(f"hourly profile {args.year}-{args.month:02d}: "
              f"min {min(profile.hourly_means):.1f} MW, "
              f"max {max(profile.hourly_means):.1f} MW")
    elif kind == "daily-average":
        profile = analytics.yearly_daily_average(series, args.year)
        _write_text(out_dir, "daily_average.csv",
                    analytics.yearly_profile_to_csv(profile))
        _write_text(out_dir, "daily_average.json",
                    analytics.yearly_profile_to_json(profile))
        print(f"daily averages for {args.year}: {len(profile.daily_means)} days")
    elif kind == "weekday-weekend":
        profile = analytics.yearly_daily_average(series, args.year)
        weekend, weekday = analytics.weekday_weekend_split(
            profile, config.weekend_days)
        _write_text(out_dir, "weekend.csv", analytics.yearly_profile_to_csv(weekend))
        _write_text(out_dir, "weekday.csv", analytics.yearly_profile_to_csv(weekday))
        print(f"{args.year}: {len(weekend.daily_means)} weekend days, "
              f"{len(weekday.daily_means)} weekdays")
    elif kind == "load-factor":
        result = analytics.load_factor(
            series, _parse_date(args.start), _parse_date(args.end))
        _write_text(out_dir, "load_factor.json",
                    analytics.load_factor_to_json(result))
        print(f"load factor {result.load_factor:.4f} "
              f"(avg {result.average_load:.1f} MW / peak {result.peak_load:.1f} MW)")
    elif kind == "monthly-energy":
        energy = analytics.monthly_energy(series, args.month, args.year)
        _write_text(out_dir, "monthly_energy.csv",
                    f"year,month,energy_gwh\n{args.year},{args.month},{energy!r}\n")
        print(f"{args.year}-{args.month:02d}: {energy:.3f} GWh")
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown analysis kind {kind!r}")
    return 0


def _cmd_emissions(args, config: ToolkitConfig, out_dir: Path) -> int:
    if config.cef_registry:
        registry = emissions.load_registry(config.cef_registry)
    else:
        registry = emissions.default_registry()
    mixes = emissions.parse_mix_csv(_read_text(args.mix))
    csv_parts = []
    json_docs = []
    for mix in mixes:
        report = emissions.emission_report(mix, registry)
        block = emissions.report_to_csv(report, mix)
        csv_parts.append(block if not csv_parts else
                         "\n".join(block.splitlines()[1:]) + "\n")
        json_docs.append(json.loads(emissions.report_to_json(report)))
        print(f"{mix.period}: {report.total:.3f} kt CO2")
    _write_text(out_dir, "emissions.csv", "".join(csv_parts))
    _write_text(out_dir, "emissions.json", json.dumps(json_docs, indent=2, sort_keys=True))
    return 0


def _cmd_impact(args, config: ToolkitConfig, out_dir: Path) -> int:
    actual = _load_daily(args.actual)
    forecast = _load_daily(args.forecast)
    report = impact.counterfactual_gap(
        actual, forecast, _parse_date(args.start), _parse_date(args.end))
    _write_text(out_dir, "impact.csv", impact.render_report_csv(report))
    _write_text(out_dir, "impact.json", impact.render_report_json(report))
    text = impact.render_report_text(report)
    _write_text(out_dir, "impact.txt", text)
    print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", default=argparse.SUPPRESS,
                        help="path to a JSON config file")
    shared.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="override the training seed")
    shared.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (default: current directory)")

    parser = argparse.ArgumentParser(
        prog="loadcast",
        parents=[shared],
        description="Electricity-demand forecasting and impact accounting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[shared],
                       help="validate, repair, and resample a demand CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--interpolate", action="store_true",
                   help="fill missing values by linear interpolation")
    p.add_argument("--resample-daily", action="store_true",
                   help="aggregate an hourly series to daily means")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("train", parents=[shared],
                       help="train a forecaster on a daily demand CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--train-end", default=None,
                   help="exclusive cutoff date; by default the whole input is "
                        "training data")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("forecast", parents=[shared],
                       help="roll a trained model over a date range")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="observed daily history CSV")
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("analyze", parents=[shared],
                       help="descriptive statistics over a demand CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", required=True,
                   choices=["hourly-profile", "daily-average", "weekday-weekend",
                            "load-factor", "monthly-energy"])
    p.add_argument("--month", type=int)
    p.add_argument("--year", type=int)
    p.add_argument("--start")
    p.add_argument("--end")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("emissions", parents=[shared],
                       help="CO2 masses for generation-mix CSV rows")
    p.add_argument("--mix", required=True)
    p.set_defaults(func=_cmd_emissions)

    p = sub.add_parser("impact", parents=[shared],
                       help="actual-vs-counterfactual monthly gap report")
    p.add_argument("--actual", required=True)
    p.add_argument("--forecast", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.set_defaults(func=_cmd_impact)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = getattr(args, "config", None)
        config = load_config(config_path) if config_path else ToolkitConfig()
        seed = getattr(args, "seed", None)
        if seed is not None:
            config = config.with_seed(seed)
        out_dir = Path(getattr(args, "out", "."))
        return args.func(args, config, out_dir)
    except ParseError as exc:
        print(f"loadcast: parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"loadcast: i/o error: {exc}", file=sys.stderr)
        return 2
    except LoadcastError as exc:
        print(f"loadcast: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
