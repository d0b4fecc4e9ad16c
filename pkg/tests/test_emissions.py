"""CO2 accounting: conversion arithmetic, fuel grouping, factor registry."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loadcast.emissions import (CEF_HEADER, MIX_HEADER, CefEntry, CefRegistry,
                                EmissionReport, Fuel, GenerationMix, cef_lookup,
                                co2_mass, default_registry, emission_report,
                                parse_cef_csv, parse_mix_csv, report_to_csv,
                                report_to_json, serialize_cef_csv,
                                serialize_mix_csv)
from loadcast.errors import (EmptyDataError, NoEmissionFactorError, ParseError,
                             ValidationError)

MIX_2021 = GenerationMix(period="2021-04", gas=4207.443, diesel=303.51026,
                         furnace_oil=1285.10725, hydro=57.14505,
                         solar=18.63133, coal=428.6752, import_=586.38808)


class TestCo2Mass:
    def test_unit_conversion(self):
        # 1 GWh at 1 g/kWh is 1e6 kWh * 1 g = 1 tonne = 0.001 kt.
        assert co2_mass(1.0, 1.0) == pytest.approx(0.001, rel=1e-12)

    def test_known_cell(self):
        assert co2_mass(4207.443, 533.17) == pytest.approx(2243.282, abs=0.01)

    @given(st.floats(0.0, 1e5), st.floats(1.0, 2000.0), st.floats(0.1, 10.0))
    def test_linearity(self, energy, cef, k):
        assert co2_mass(k * energy, cef) == pytest.approx(
            k * co2_mass(energy, cef), rel=1e-9, abs=1e-9)

    @given(st.floats(0.0, 1e5), st.floats(0.0, 1e5), st.floats(1.0, 2000.0))
    def test_monotone_in_energy(self, a, b, cef):
        lo, hi = sorted((a, b))
        assert co2_mass(lo, cef) <= co2_mass(hi, cef)

    def test_rejects_negative_and_nonfinite(self):
        with pytest.raises(ValidationError):
            co2_mass(-1.0, 500.0)
        with pytest.raises(ValidationError):
            co2_mass(float("inf"), 500.0)


class TestRegistry:
    def test_default_factors(self):
        registry = default_registry()
        assert cef_lookup(Fuel.GAS, registry).avg_cef == 533.17
        assert cef_lookup(Fuel.FURNACE_OIL_AND_DIESEL, registry).avg_cef == 773.80
        assert cef_lookup(Fuel.SOLAR, registry).avg_cef == 65.05
        assert cef_lookup(Fuel.COAL, registry).avg_cef == 942.33
        assert cef_lookup(Fuel.HYDRO, registry).avg_cef == 8.22

    def test_entry_ordering_validated(self):
        with pytest.raises(ValidationError):
            CefEntry(fuel=Fuel.GAS, min_cef=100.0, max_cef=50.0, avg_cef=75.0)
        with pytest.raises(ValidationError):
            CefEntry(fuel=Fuel.GAS, min_cef=0.0, max_cef=50.0, avg_cef=25.0)

    def test_duplicate_fuel_rejected(self):
        entry = CefEntry(fuel=Fuel.GAS, min_cef=1.0, max_cef=3.0, avg_cef=2.0)
        with pytest.raises(ValidationError):
            CefRegistry([entry, entry])

    def test_missing_fuel(self):
        registry = CefRegistry([
            CefEntry(fuel=Fuel.GAS, min_cef=1.0, max_cef=3.0, avg_cef=2.0)])
        with pytest.raises(NoEmissionFactorError, match="hydro"):
            registry.lookup(Fuel.HYDRO)

    def test_cef_csv_round_trip(self):
        registry = default_registry()
        text = serialize_cef_csv(registry)
        assert text.splitlines()[0] == CEF_HEADER
        back = parse_cef_csv(text)
        for fuel in registry.fuels():
            assert back.lookup(fuel) == registry.lookup(fuel)

    def test_cef_csv_errors(self):
        with pytest.raises(ParseError) as exc:
            parse_cef_csv("bogus\n")
        assert exc.value.line == 1
        with pytest.raises(ParseError) as exc:
            parse_cef_csv(CEF_HEADER + "\nplutonium,1,2,1.5\n")
        assert exc.value.line == 2
        with pytest.raises(ParseError):
            parse_cef_csv(CEF_HEADER + "\ngas,1,2\n")
        with pytest.raises(ParseError):
            parse_cef_csv(CEF_HEADER + "\ngas,one,2,1.5\n")


class TestEmissionReport:
    def test_known_period(self):
        report = emission_report(MIX_2021)
        masses = dict(report.masses)
        assert masses[Fuel.GAS] == pytest.approx(2243.282, abs=0.01)
        assert masses[Fuel.FURNACE_OIL_AND_DIESEL] == pytest.approx(1229.28, abs=0.01)
        assert masses[Fuel.SOLAR] == pytest.approx(1.212, abs=0.01)
        assert masses[Fuel.COAL] == pytest.approx(403.954, abs=0.01)
        assert masses[Fuel.HYDRO] == pytest.approx(0.47, abs=0.005)

    def test_oil_and_diesel_summed(self):
        mix = GenerationMix(period="p", gas=0.0, diesel=100.0, furnace_oil=50.0,
                            hydro=0.0, solar=0.0, coal=0.0, import_=0.0)
        report = emission_report(mix)
        masses = dict(report.masses)
        assert masses[Fuel.FURNACE_OIL_AND_DIESEL] == pytest.approx(
            co2_mass(150.0, 773.80), rel=1e-12)

    def test_import_excluded(self):
        base = GenerationMix(period="p", gas=100.0, diesel=0.0, furnace_oil=0.0,
                             hydro=0.0, solar=0.0, coal=0.0, import_=0.0)
        heavy = GenerationMix(period="p", gas=100.0, diesel=0.0, furnace_oil=0.0,
                              hydro=0.0, solar=0.0, coal=0.0, import_=5000.0)
        assert emission_report(base).total == emission_report(heavy).total
        assert Fuel.GAS in dict(emission_report(heavy).masses)
        assert len(emission_report(heavy).masses) == 5

    def test_total_is_sum(self):
        report = emission_report(MIX_2021)
        assert report.total == pytest.approx(
            sum(m for _, m in report.masses), abs=1e-12)

    def test_total_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            EmissionReport(period="p", masses=((Fuel.GAS, 1.0),), total=2.0)

    def test_partial_registry_fails_loudly(self):
        registry = CefRegistry([
            CefEntry(fuel=Fuel.GAS, min_cef=380.0, max_cef=1000.0,
                     avg_cef=533.17)])
        with pytest.raises(NoEmissionFactorError):
            emission_report(MIX_2021, registry)

    def test_mix_validation(self):
        with pytest.raises(ValidationError):
            GenerationMix(period="p", gas=-1.0, diesel=0.0, furnace_oil=0.0,
                          hydro=0.0, solar=0.0, coal=0.0, import_=0.0)
        with pytest.raises(ValidationError):
            GenerationMix(period="p", gas=float("nan"), diesel=0.0,
                          furnace_oil=0.0, hydro=0.0, solar=0.0, coal=0.0,
                          import_=0.0)


class TestMixCsv:
    def test_round_trip(self):
        text = serialize_mix_csv([MIX_2021])
        assert text.splitlines()[0] == MIX_HEADER
        back = parse_mix_csv(text)
        assert back == [MIX_2021]

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_mix_csv("wrong,header\n")
        with pytest.raises(EmptyDataError):
            parse_mix_csv(MIX_HEADER + "\n")
        with pytest.raises(ParseError) as exc:
            parse_mix_csv(MIX_HEADER + "\n2021-04,1,2,3\n")
        assert exc.value.line == 2
        with pytest.raises(ParseError):
            parse_mix_csv(MIX_HEADER + "\n2021-04,x,2,3,4,5,6,7\n")


class TestReportExport:
    def test_csv_shape(self):
        report = emission_report(MIX_2021)
        lines = report_to_csv(report, MIX_2021).strip().split("\n")
        assert lines[0] == "period,fuel,energy_gwh,co2_kt"
        assert len(lines) == 1 + 5 + 1
        assert lines[-1].startswith("2021-04,total,")
        gas_row = lines[1].split(",")
        assert gas_row[1] == "gas"
        assert float(gas_row[2]) == MIX_2021.gas

    def test_json_document(self):
        report = emission_report(MIX_2021)
        doc = json.loads(report_to_json(report))
        assert doc["period"] == "2021-04"
        assert doc["co2_kt"]["gas"] == pytest.approx(2243.282, abs=0.01)
        assert doc["total_kt"] == pytest.approx(report.total)
