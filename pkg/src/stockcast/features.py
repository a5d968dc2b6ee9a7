"""Technical indicators, min-max scaling, feature assembly and windowing.

Twelve feature sets combine four column blocks in a fixed order:

    prices      open, high, low, close, adj_close, volume
    tweets      tweet_mean_label, tweet_mean_conf, tweet_count
    w-tweets    tweet_mean_ws, tweet_count        (replaces tweets)
    news        news_mean_label, news_mean_conf, news_count
    indicators  rsi, sma

Scaling is fitted on the training span only; test rows are transformed
with the same state and may land outside [0, 1] (never clipped).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyColumn,
    InsufficientHistory,
    MisalignedInputs,
    SeriesTooShort,
)

PRICE_COLUMNS = ["open", "high", "low", "close", "adj_close", "volume"]
TWEET_COLUMNS = ["tweet_mean_label", "tweet_mean_conf", "tweet_count"]
WEIGHTED_TWEET_COLUMNS = ["tweet_mean_ws", "tweet_count"]
NEWS_COLUMNS = ["news_mean_label", "news_mean_conf", "news_count"]
INDICATOR_COLUMNS = ["rsi", "sma"]

_BLOCKS = {
    "prices": PRICE_COLUMNS,
    "tweets": TWEET_COLUMNS,
    "weighted_tweets": WEIGHTED_TWEET_COLUMNS,
    "news": NEWS_COLUMNS,
    "indicators": INDICATOR_COLUMNS,
}

#: The twelve feature-set identifiers and the blocks each one stacks.
FEATURE_SETS = {
    "Prices": ("prices",),
    "Prices-RSI-SMA": ("prices", "indicators"),
    "Prices-News": ("prices", "news"),
    "Prices-News-RSI-SMA": ("prices", "news", "indicators"),
    "Prices-Tweets": ("prices", "tweets"),
    "Prices-Tweets-RSI-SMA": ("prices", "tweets", "indicators"),
    "Prices-Tweets-News": ("prices", "tweets", "news"),
    "Prices-Tweets-News-RSI-SMA": ("prices", "tweets", "news", "indicators"),
    "Prices-Weighted-Tweets": ("prices", "weighted_tweets"),
    "Prices-Weighted-Tweets-RSI-SMA": ("prices", "weighted_tweets", "indicators"),
    "Prices-Weighted-Tweets-News": ("prices", "weighted_tweets", "news"),
    "Prices-Weighted-Tweets-News-RSI-SMA": (
        "prices", "weighted_tweets", "news", "indicators",
    ),
}


def feature_set_columns(feature_set):
    """Documented column order for one feature-set id."""
    if feature_set not in FEATURE_SETS:
        raise KeyError(f"unknown feature set {feature_set!r}")
    cols = []
    for block in FEATURE_SETS[feature_set]:
        cols.extend(_BLOCKS[block])
    return cols


# --- indicators -------------------------------------------------------------

def sma(closes, period):
    """Simple moving average; warm-up entries take the first defined value.

    output[t] = mean(closes[t-period+1 .. t]) for t >= period-1.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    n = len(closes)
    if n < period:
        raise SeriesTooShort(f"need at least {period} closes, got {n}")
    out = [0.0] * n
    for t in range(period - 1, n):
        out[t] = sum(closes[t - period + 1:t + 1]) / period
    for t in range(period - 1):
        out[t] = out[period - 1]
    return out


def rsi(closes, period):
    """Relative Strength Index with Wilder smoothing, in [0, 100].

    The first averages are simple means of the first ``period`` deltas;
    afterwards avg = (prev*(period-1) + delta)/period. Zero average loss
    gives 100, zero average gain gives 0, both zero give 50. Warm-up
    entries are filled with the neutral 50.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    n = len(closes)
    if n < period + 1:
        raise SeriesTooShort(f"need at least {period + 1} closes, got {n}")
    gains = [0.0] * n
    losses = [0.0] * n
    for t in range(1, n):
        delta = closes[t] - closes[t - 1]
        if delta > 0:
            gains[t] = delta
        else:
            losses[t] = -delta
    out = [50.0] * n
    avg_gain = sum(gains[1:period + 1]) / period
    avg_loss = sum(losses[1:period + 1]) / period
    for t in range(period, n):
        if t > period:
            avg_gain = (avg_gain * (period - 1) + gains[t]) / period
            avg_loss = (avg_loss * (period - 1) + losses[t]) / period
        if avg_gain == 0 and avg_loss == 0:
            out[t] = 50.0
        elif avg_loss == 0:
            out[t] = 100.0
        elif avg_gain == 0:
            out[t] = 0.0
        else:
            rs = avg_gain / avg_loss
            out[t] = 100.0 - 100.0 / (1.0 + rs)
    return out


# --- min-max scaling ----------------------------------------------------------

@dataclass(frozen=True)
class NormalizationState:
    """Per-column (min, max) fitted on the training span."""

    columns: tuple
    mins: np.ndarray
    maxs: np.ndarray

    def column_state(self, name):
        i = self.columns.index(name)
        return float(self.mins[i]), float(self.maxs[i])


def minmax_fit(values, columns):
    """Fit per-column (min, max) on a (rows, cols) array."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] == 0:
        raise EmptyColumn(columns[0] if columns else "<none>")
    return NormalizationState(
        columns=tuple(columns),
        mins=values.min(axis=0),
        maxs=values.max(axis=0),
    )


def minmax_transform(state, values):
    """(x - min) / (max - min); constant columns map to 0.0. Not clipped."""
    values = np.asarray(values, dtype=np.float64)
    span = state.maxs - state.mins
    safe = np.where(span == 0, 1.0, span)
    out = (values - state.mins) / safe
    return np.where(span == 0, 0.0, out)


def minmax_invert(state, values):
    """Undo minmax_transform; constant columns invert to their min."""
    values = np.asarray(values, dtype=np.float64)
    return values * (state.maxs - state.mins) + state.mins


# --- assembly -------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureMatrix:
    """Date-indexed raw feature values for one feature set."""

    feature_set: str
    dates: tuple
    columns: tuple
    values: np.ndarray  # (n_dates, n_columns) float64

    def column(self, name):
        return self.values[:, self.columns.index(name)]


def assemble(feature_set, bars, tweet_daily=None, news_daily=None, indicators=None):
    """Stack the blocks of one feature set into a raw FeatureMatrix.

    All inputs must cover exactly the bar dates, in order. Values are
    left unscaled here; make_windows fits normalization on the training
    span so no test information leaks into the scaler.

    Raises:
        MisalignedInputs: a sentiment row or indicator series does not
            line up with the bar dates.
    """
    columns = feature_set_columns(feature_set)
    blocks = FEATURE_SETS[feature_set]
    dates = [bar.date for bar in bars]
    n = len(bars)

    parts = []
    for block in blocks:
        if block == "prices":
            parts.append(np.array(
                [[b.open, b.high, b.low, b.close, b.adj_close, b.volume] for b in bars],
                dtype=np.float64,
            ))
        elif block in ("tweets", "weighted_tweets"):
            if tweet_daily is None:
                raise ValueError(f"{feature_set} needs tweet_daily")
            _check_aligned(dates, [d.date for d in tweet_daily])
            if block == "tweets":
                rows = [[d.mean_label, d.mean_conf, d.count] for d in tweet_daily]
            else:
                rows = [[d.mean_ws, d.count] for d in tweet_daily]
            parts.append(np.array(rows, dtype=np.float64))
        elif block == "news":
            if news_daily is None:
                raise ValueError(f"{feature_set} needs news_daily")
            _check_aligned(dates, [d.date for d in news_daily])
            parts.append(np.array(
                [[d.mean_label, d.mean_conf, d.count] for d in news_daily],
                dtype=np.float64,
            ))
        elif block == "indicators":
            if indicators is None:
                raise ValueError(f"{feature_set} needs indicators")
            for key in INDICATOR_COLUMNS:
                if len(indicators[key]) != n:
                    raise MisalignedInputs(dates[min(len(indicators[key]), n - 1)])
            parts.append(np.column_stack([
                np.asarray(indicators[key], dtype=np.float64) for key in INDICATOR_COLUMNS
            ]))
    values = np.hstack(parts)
    assert values.shape == (n, len(columns))
    return FeatureMatrix(
        feature_set=feature_set,
        dates=tuple(dates),
        columns=tuple(columns),
        values=values,
    )


def _check_aligned(bar_dates, other_dates):
    if len(bar_dates) != len(other_dates):
        shorter = min(len(bar_dates), len(other_dates))
        raise MisalignedInputs(bar_dates[min(shorter, len(bar_dates) - 1)])
    for bd, od in zip(bar_dates, other_dates):
        if bd != od:
            raise MisalignedInputs(bd)


def write_matrix_csv(path, matrix, header_comment=None):
    """Export a FeatureMatrix as CSV: date column first, then features."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["date", *matrix.columns])
        for d, row in zip(matrix.dates, matrix.values):
            writer.writerow([d.isoformat(), *[repr(float(v)) for v in row]])


# --- windowing ------------------------------------------------------------------

@dataclass(frozen=True)
class WindowedDataset:
    """Supervised samples: lookback rows of features -> next normalized close."""

    X: np.ndarray       # (n_samples, lookback, n_features)
    y: np.ndarray       # (n_samples,)
    dates: tuple        # target date per sample

    def __len__(self):
        return self.X.shape[0]


@dataclass(frozen=True)
class SplitWindows:
    train: WindowedDataset
    test: WindowedDataset
    norm: NormalizationState
    columns: tuple


def make_windows(matrix, lookback, split_date):
    """Scale a raw FeatureMatrix and cut it into train/test samples.

    The sample with target row t consumes rows [t-lookback, t); train
    samples are those with target date <= split_date, test the rest.
    Test windows may reach back into training rows for context, which
    leaks nothing (those rows predate the targets).

    Raises:
        InsufficientHistory: lookback >= number of training rows.
    """
    if lookback < 1:
        raise ValueError("lookback must be >= 1")
    dates = matrix.dates
    n = len(dates)
    n_train_rows = sum(1 for d in dates if d <= split_date)
    if lookback >= n_train_rows:
        raise InsufficientHistory(
            f"lookback {lookback} >= training rows {n_train_rows}"
        )
    norm = minmax_fit(matrix.values[:n_train_rows], matrix.columns)
    scaled = minmax_transform(norm, matrix.values)
    close_idx = matrix.columns.index("close")

    def build(t_start, t_stop):
        targets = range(t_start, t_stop)
        X = np.stack([scaled[t - lookback:t] for t in targets]) if t_stop > t_start \
            else np.empty((0, lookback, len(matrix.columns)))
        y = np.array([scaled[t, close_idx] for t in targets], dtype=np.float64)
        return WindowedDataset(X=X, y=y, dates=tuple(dates[t] for t in targets))

    train = build(lookback, n_train_rows)
    test = build(n_train_rows, n)
    return SplitWindows(train=train, test=test, norm=norm, columns=matrix.columns)


__all__ = [
    "FEATURE_SETS",
    "PRICE_COLUMNS",
    "TWEET_COLUMNS",
    "WEIGHTED_TWEET_COLUMNS",
    "NEWS_COLUMNS",
    "INDICATOR_COLUMNS",
    "feature_set_columns",
    "sma",
    "rsi",
    "NormalizationState",
    "minmax_fit",
    "minmax_transform",
    "minmax_invert",
    "FeatureMatrix",
    "assemble",
    "write_matrix_csv",
    "WindowedDataset",
    "SplitWindows",
    "make_windows",
]
