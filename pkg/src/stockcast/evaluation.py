"""R-squared / MAE metrics and replicate averaging."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantTarget, LengthMismatch, MixedFeatureSets

SCALES = ("normalized", "denormalized")


@dataclass(frozen=True)
class RunMetrics:
    feature_set: str
    seed: int
    r2: float
    mae: float
    scale: str


@dataclass(frozen=True)
class AggregateReport:
    feature_set: str
    scale: str
    replicates: int
    r2_mean: float
    mae_mean: float
    r2_runs: tuple
    mae_runs: tuple


def _pair(y_true, y_pred, min_len):
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"{y_true.shape} vs {y_pred.shape}")
    if y_true.size < min_len:
        raise LengthMismatch(f"need at least {min_len} points, got {y_true.size}")
    return y_true, y_pred


def r_squared(y_true, y_pred):
    """1 - SS_res/SS_tot. May be negative; constant targets are an error
    rather than a silent zero, so degenerate fixtures surface."""
    y_true, y_pred = _pair(y_true, y_pred, 2)
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0:
        raise ConstantTarget("target series is constant")
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    return 1.0 - ss_res / ss_tot


def mae(y_true, y_pred):
    """Mean absolute error."""
    y_true, y_pred = _pair(y_true, y_pred, 1)
    return float(np.mean(np.abs(y_true - y_pred)))


def replicate_average(runs):
    """Average RunMetrics over replicates of one (feature set, scale).

    Raises:
        MixedFeatureSets: runs disagree on feature_set or scale.
    """
    if not runs:
        raise ValueError("need at least one run")
    feature_set = runs[0].feature_set
    scale = runs[0].scale
    for run in runs:
        if run.feature_set != feature_set or run.scale != scale:
            raise MixedFeatureSets(
                f"cannot average {run.feature_set}/{run.scale} "
                f"with {feature_set}/{scale}"
            )
    r2_runs = tuple(run.r2 for run in runs)
    mae_runs = tuple(run.mae for run in runs)
    return AggregateReport(
        feature_set=feature_set,
        scale=scale,
        replicates=len(runs),
        r2_mean=sum(r2_runs) / len(runs),
        mae_mean=sum(mae_runs) / len(runs),
        r2_runs=r2_runs,
        mae_runs=mae_runs,
    )


__all__ = ["RunMetrics", "AggregateReport", "r_squared", "mae", "replicate_average", "SCALES"]
