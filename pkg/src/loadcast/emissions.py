"""Fuel-mix CO2 accounting.

Masses follow kt = GWh x (g/kWh) / 1000: one GWh at one gram per kWh is one
tonne. Diesel and furnace oil share a single combined factor, so their
energies are summed before conversion. Imported electricity has no factor in
the registry and is excluded from mass totals.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import (EmptyDataError, NoEmissionFactorError, ParseError,
                     ValidationError)

CEF_HEADER = "fuel,min_cef,max_cef,avg_cef"
MIX_HEADER = ("period,gas_gwh,diesel_gwh,furnace_oil_gwh,hydro_gwh,"
              "solar_gwh,coal_gwh,import_gwh")
EMISSION_REPORT_HEADER = "period,fuel,energy_gwh,co2_kt"

GRAMS_PER_KWH_TO_KT_PER_GWH = 1.0 / 1000.0


class Fuel(enum.Enum):
    """Fuels carrying a CO2 emission factor."""

    GAS = "gas"
    FURNACE_OIL_AND_DIESEL = "furnace_oil_and_diesel"
    SOLAR = "solar"
    COAL = "coal"
    HYDRO = "hydro"


@dataclass(frozen=True)
class CefEntry:
    """Emission-factor range for one fuel, grams CO2 per kWh."""

    fuel: Fuel
    min_cef: float
    max_cef: float
    avg_cef: float

    def __post_init__(self):
        if not (0.0 < self.min_cef <= self.avg_cef <= self.max_cef):
            raise ValidationError(
                f"{self.fuel.value}: need 0 < min <= avg <= max, "
                f"got {self.min_cef}/{self.avg_cef}/{self.max_cef}")


@dataclass(frozen=True)
class GenerationMix:
    """Energy generated per source over one period, GWh."""

    period: str
    gas: float
    diesel: float
    furnace_oil: float
    hydro: float
    solar: float
    coal: float
    import_: float

    def __post_init__(self):
        for name in ("gas", "diesel", "furnace_oil", "hydro", "solar",
                     "coal", "import_"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"{name} energy is not finite")
            if value < 0:
                raise ValidationError(f"{name} energy is negative")


@dataclass(frozen=True)
class EmissionReport:
    """CO2 mass per fuel and in total, kilotons."""

    period: str
    masses: tuple[tuple[Fuel, float], ...]
    total: float

    def __post_init__(self):
        parts = sum(m for _, m in self.masses)
        if abs(parts - self.total) > 1e-9:
            raise ValidationError("total does not equal the sum of per-fuel masses")
        for fuel, mass in self.masses:
            if mass < 0:
                raise ValidationError(f"{fuel.value} mass is negative")


class CefRegistry:
    """Lookup table from fuel to emission factor."""

    def __init__(self, entries: list[CefEntry]):
        self._entries: dict[Fuel, CefEntry] = {}
        for entry in entries:
            if entry.fuel in self._entries:
                raise ValidationError(f"duplicate registry entry for {entry.fuel.value}")
            self._entries[entry.fuel] = entry

    def lookup(self, fuel: Fuel) -> CefEntry:
        try:
            return self._entries[fuel]
        except KeyError:
            raise NoEmissionFactorError(
                f"no emission factor registered for {fuel.value}") from None

    def fuels(self) -> list[Fuel]:
        return list(self._entries)


def parse_cef_csv(text: str) -> CefRegistry:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CEF_HEADER:
        raise ParseError(f"expected header {CEF_HEADER!r}", line=1)
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields, got {len(parts)}", line=lineno)
        try:
            fuel = Fuel(parts[0])
        except ValueError:
            raise ParseError(f"unknown fuel {parts[0]!r}", line=lineno) from None
        try:
            lo, hi, avg = float(parts[1]), float(parts[2]), float(parts[3])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        entries.append(CefEntry(fuel=fuel, min_cef=lo, max_cef=hi, avg_cef=avg))
    return CefRegistry(entries)


def serialize_cef_csv(registry: CefRegistry) -> str:
    lines = [CEF_HEADER]
    for fuel in registry.fuels():
        e = registry.lookup(fuel)
        lines.append(f"{fuel.value},{e.min_cef!r},{e.max_cef!r},{e.avg_cef!r}")
    return "\n".join(lines) + "\n"


def default_registry() -> CefRegistry:
    """The registry shipped with the package (grid-average factors per fuel)."""
    text = resources.files("loadcast.data").joinpath("cef_table.csv").read_text()
    return parse_cef_csv(text)


def load_registry(path) -> CefRegistry:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_cef_csv(fh.read())


def cef_lookup(fuel: Fuel, registry: CefRegistry | None = None) -> CefEntry:
    if registry is None:
        registry = default_registry()
    return registry.lookup(fuel)


def co2_mass(energy_gwh: float, cef_g_per_kwh: float) -> float:
    """Kilotons of CO2 from `energy_gwh` at factor `cef_g_per_kwh`."""
    if not math.isfinite(energy_gwh):
        raise ValidationError("energy must be finite")
    if energy_gwh < 0:
        raise ValidationError("energy must be non-negative")
    return energy_gwh * cef_g_per_kwh * GRAMS_PER_KWH_TO_KT_PER_GWH


def emission_report(mix: GenerationMix,
                    registry: CefRegistry | None = None) -> EmissionReport:
    """Per-fuel CO2 masses for one generation mix.

    Imports carry no factor and contribute no mass.
    """
    if registry is None:
        registry = default_registry()
    pairs = [
        (Fuel.GAS, mix.gas),
        (Fuel.FURNACE_OIL_AND_DIESEL, mix.furnace_oil + mix.diesel),
        (Fuel.SOLAR, mix.solar),
        (Fuel.COAL, mix.coal),
        (Fuel.HYDRO, mix.hydro),
    ]
    masses = tuple(
        (fuel, co2_mass(energy, registry.lookup(fuel).avg_cef))
        for fuel, energy in pairs
    )
    return EmissionReport(period=mix.period, masses=masses,
                          total=sum(m for _, m in masses))


def parse_mix_csv(text: str) -> list[GenerationMix]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != MIX_HEADER:
        raise ParseError(f"expected header {MIX_HEADER!r}", line=1)
    mixes = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 8:
            raise ParseError(f"expected 8 fields, got {len(parts)}", line=lineno)
        try:
            values = [float(v) for v in parts[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        mixes.append(GenerationMix(
            period=parts[0], gas=values[0], diesel=values[1],
            furnace_oil=values[2], hydro=values[3], solar=values[4],
            coal=values[5], import_=values[6]))
    if not mixes:
        raise EmptyDataError("mix file has no data rows")
    return mixes


def serialize_mix_csv(mixes: list[GenerationMix]) -> str:
    lines = [MIX_HEADER]
    for m in mixes:
        lines.append(",".join([
            m.period, repr(m.gas), repr(m.diesel), repr(m.furnace_oil),
            repr(m.hydro), repr(m.solar), repr(m.coal), repr(m.import_)]))
    return "\n".join(lines) + "\n"


def report_to_csv(report: EmissionReport, mix: GenerationMix) -> str:
    energies = {
        Fuel.GAS: mix.gas,
        Fuel.FURNACE_OIL_AND_DIESEL: mix.furnace_oil + mix.diesel,
        Fuel.SOLAR: mix.solar,
        Fuel.COAL: mix.coal,
        Fuel.HYDRO: mix.hydro,
    }
    lines = [EMISSION_REPORT_HEADER]
    for fuel, mass in report.masses:
        lines.append(f"{report.period},{fuel.value},{energies[fuel]!r},{mass!r}")
    lines.append(f"{report.period},total,{sum(energies.values())!r},{report.total!r}")
    return "\n".join(lines) + "\n"


def report_to_json(report: EmissionReport) -> str:
    doc = {
        "period": report.period,
        "co2_kt": {fuel.value: mass for fuel, mass in report.masses},
        "total_kt": report.total,
    }
    return json.dumps(doc, indent=2, sort_keys=True)
