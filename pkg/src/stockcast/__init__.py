"""stockcast: deterministic multimodal stock forecasting.

Sentiment-weighted features from tweets and news, a from-scratch LSTM
next-day close forecaster, R2/MAE evaluation over seeded replicates, and
a rule-based trading simulation, all driven by flat config files.
"""

__version__ = "0.1.0"
