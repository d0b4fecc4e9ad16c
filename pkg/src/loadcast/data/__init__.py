"""Bundled data files (default CO2 emission-factor registry)."""
