"""loadcast: electricity-demand forecasting and impact accounting.

Load series ingestion, a from-scratch stacked LSTM forecaster with compiled
and pure-numpy kernel backends, demand analytics, fuel-mix CO2 accounting,
and counterfactual impact reports.
"""

__version__ = "0.1.0"
