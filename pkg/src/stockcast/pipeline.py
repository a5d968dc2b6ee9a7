"""End-to-end orchestration: files in, reports out.

Everything here is deterministic for a fixed config: replicate i trains
with seed base_seed + i, report files serialize floats via repr, and no
wall-clock state enters any output, so rerunning a config reproduces
identical bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import features, forecaster, market_sim, sentiment, textprep
from .errors import ConfigError
from .evaluation import RunMetrics, mae, r_squared, replicate_average
from .ingest import assign_posts, calendar_from_bars, load_posts_jsonl, load_price_csv


@dataclass
class Dataset:
    """Validated inputs plus daily sentiment, aligned to the calendar."""

    bars: list
    calendar: object
    tweets: list
    news: list
    tweet_daily: list
    news_daily: list


def make_provider(config):
    if config.provider == "lexicon":
        lexicon = sentiment.load_lexicon(config.lexicon)
        return sentiment.LexiconProvider(lexicon)
    if config.provider == "replay":
        return sentiment.ReplayProvider.from_jsonl(config.replay_scores)
    raise ConfigError(f"unknown provider {config.provider!r}")


def load_dataset(config):
    """Load + validate prices and posts, score posts, aggregate daily."""
    bars = load_price_csv(config.prices)
    calendar = calendar_from_bars(bars)
    tweets = load_posts_jsonl(config.tweets, "tweet", min_likes=config.min_likes)
    news = load_posts_jsonl(config.news, "news")

    provider = make_provider(config)
    stopwords = textprep.load_stopwords(config.stopwords)
    weights = sentiment.WeightParams(config.alpha, config.beta, config.gamma, config.delta)

    def score_assigned(posts):
        scored = {}
        for day, day_posts in assign_posts(posts, calendar).items():
            scored[day] = [
                sentiment.score_post(
                    post,
                    provider.score(
                        textprep.clean_text(post.text, stopwords, config.keep_cashtags),
                        post_id=post.id,
                    ),
                    weights,
                )
                for post in day_posts
            ]
        return scored

    tweet_daily = sentiment.aggregate_daily(score_assigned(tweets), calendar)
    news_daily = sentiment.aggregate_daily(score_assigned(news), calendar)
    return Dataset(
        bars=bars,
        calendar=calendar,
        tweets=tweets,
        news=news,
        tweet_daily=tweet_daily,
        news_daily=news_daily,
    )


def build_matrix(config, dataset, feature_set):
    """Raw (unscaled) FeatureMatrix for one feature set."""
    indicators = None
    if "indicators" in features.FEATURE_SETS[feature_set]:
        closes = [bar.close for bar in dataset.bars]
        indicators = {
            "rsi": features.rsi(closes, config.rsi_period),
            "sma": features.sma(closes, config.sma_period),
        }
    return features.assemble(
        feature_set,
        dataset.bars,
        tweet_daily=dataset.tweet_daily,
        news_daily=dataset.news_daily,
        indicators=indicators,
    )


@dataclass
class FeatureSetResult:
    feature_set: str
    split: object                   # features.SplitWindows
    run_metrics: list               # RunMetrics, both scales
    reports: list                   # AggregateReport, both scales
    mean_pred_norm: np.ndarray      # replicate-mean normalized predictions
    mean_pred_price: np.ndarray     # same, on the price scale
    loss_histories: list


def run_feature_set(config, dataset, feature_set):
    """Train `replicates` seeded models on one feature set and evaluate."""
    matrix = build_matrix(config, dataset, feature_set)
    split = features.make_windows(matrix, config.lookback, config.split_date)
    close_min, close_max = split.norm.column_state("close")

    def to_price(values):
        return values * (close_max - close_min) + close_min

    y_true_norm = split.test.y
    y_true_price = to_price(y_true_norm)

    run_metrics = []
    preds = []
    losses = []
    for i in range(config.replicates):
        model_config = forecaster.LstmConfig(
            hidden_units=config.hidden_units,
            learning_rate=config.learning_rate,
            batch_size=config.batch_size,
            epochs=config.epochs,
            lookback=config.lookback,
            seed=config.base_seed + i,
        )
        weights, loss_history = forecaster.train(split.train, model_config)
        pred_norm = forecaster.predict(weights, split.test)
        preds.append(pred_norm)
        losses.append(loss_history)
        run_metrics.append(RunMetrics(
            feature_set, model_config.seed,
            r_squared(y_true_norm, pred_norm), mae(y_true_norm, pred_norm),
            "normalized",
        ))
        pred_price = to_price(pred_norm)
        run_metrics.append(RunMetrics(
            feature_set, model_config.seed,
            r_squared(y_true_price, pred_price), mae(y_true_price, pred_price),
            "denormalized",
        ))

    reports = [
        replicate_average([m for m in run_metrics if m.scale == scale])
        for scale in ("normalized", "denormalized")
    ]
    mean_pred_norm = np.mean(np.stack(preds), axis=0)
    return FeatureSetResult(
        feature_set=feature_set,
        split=split,
        run_metrics=run_metrics,
        reports=reports,
        mean_pred_norm=mean_pred_norm,
        mean_pred_price=to_price(mean_pred_norm),
        loss_histories=losses,
    )


def simulate_feature_set(config, dataset, result):
    """Trade the replicate-mean predictions over the test period."""
    test_dates = result.split.test.dates
    bars_by_date = {bar.date: bar for bar in dataset.bars}
    bars = [bars_by_date[d] for d in test_dates]
    predictions = list(zip(test_dates, result.mean_pred_price.tolist()))
    sim_config = market_sim.SimConfig(
        initial_capital=config.initial_capital,
        profit_threshold=config.profit_threshold,
        dip_threshold=config.dip_threshold,
    )
    return market_sim.run_simulation(predictions, bars, sim_config)


# --- report writers ---------------------------------------------------------

def _protocol_echo(config):
    return {
        "hidden_units": config.hidden_units,
        "learning_rate": config.learning_rate,
        "batch_size": config.batch_size,
        "epochs": config.epochs,
        "replicates": config.replicates,
        "split_date": config.split_date.isoformat(),
        "initial_capital": config.initial_capital,
        "profit_threshold": config.profit_threshold,
        "dip_threshold": config.dip_threshold,
        "lookback": config.lookback,
        "base_seed": config.base_seed,
    }


def write_report_json(path, config, results):
    rows = []
    for result in results:
        for report in result.reports:
            rows.append({
                "stock": config.stock,
                "sentiment_provider": config.provider,
                "feature_set": report.feature_set,
                "replicates": report.replicates,
                "r2_mean": report.r2_mean,
                "mae_mean": report.mae_mean,
                "r2_runs": list(report.r2_runs),
                "mae_runs": list(report.mae_runs),
                "scale": report.scale,
            })
    payload = {
        "config_hash": config.config_hash,
        "protocol": _protocol_echo(config),
        "reports": rows,
    }
    _write_json(path, payload)


def write_metrics_csv(path, config, results, scale="normalized"):
    """Flat table, one row per feature set (the Tables 4-5 shape)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# config_hash={config.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["feature_set", "stock", "sentiment_provider", "r2", "mae"])
        for result in results:
            for report in result.reports:
                if report.scale != scale:
                    continue
                writer.writerow([
                    report.feature_set, config.stock, config.provider,
                    repr(report.r2_mean), repr(report.mae_mean),
                ])


def write_predictions_csv(path, config, result):
    """Plot-ready series: per test date, truth and replicate-mean forecast."""
    split = result.split
    close_min, close_max = split.norm.column_state("close")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# config_hash={config.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["date", "close_norm", "pred_norm", "close", "pred"])
        for i, d in enumerate(split.test.dates):
            truth_norm = float(split.test.y[i])
            pred_norm = float(result.mean_pred_norm[i])
            writer.writerow([
                d.isoformat(),
                repr(truth_norm),
                repr(pred_norm),
                repr(truth_norm * (close_max - close_min) + close_min),
                repr(float(result.mean_pred_price[i])),
            ])


def write_ledger_csv(path, config, sim_result):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# config_hash={config.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["date", "r", "action", "entry_price", "exit_price", "capital_after"])
        for entry in sim_result.ledger:
            writer.writerow([
                entry.date.isoformat(),
                repr(entry.r),
                entry.action,
                "" if entry.entry_price is None else repr(entry.entry_price),
                "" if entry.exit_price is None else repr(entry.exit_price),
                repr(entry.capital_after),
            ])


def write_simulation_json(path, config, sim_results):
    payload = {
        "config_hash": config.config_hash,
        "protocol": _protocol_echo(config),
        "stock": config.stock,
        "sentiment_provider": config.provider,
        "rows": [
            {
                "feature_set": feature_set,
                "percent_gain": sim.percent_gain,
                "final_capital": sim.final_capital,
                "trades": sum(1 for e in sim.ledger if e.action != market_sim.NONE),
            }
            for feature_set, sim in sim_results
        ],
    }
    _write_json(path, payload)


def _write_json(path, payload):
    Path(path).write_text(
        json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )


def safe_name(feature_set):
    return feature_set.lower().replace("-", "_")


def run_train_eval(config, out_dir):
    """The train-eval command body; returns the per-set results."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = load_dataset(config)
    results = [run_feature_set(config, dataset, fs) for fs in config.feature_sets]
    write_report_json(out_dir / "report.json", config, results)
    write_metrics_csv(out_dir / "metrics_table.csv", config, results)
    for result in results:
        write_predictions_csv(
            out_dir / f"predictions_{safe_name(result.feature_set)}.csv", config, result
        )
    return dataset, results


def run_simulate(config, out_dir):
    """The simulate command body; trains in-run, then trades."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = load_dataset(config)
    sim_results = []
    for feature_set in config.feature_sets:
        result = run_feature_set(config, dataset, feature_set)
        sim = simulate_feature_set(config, dataset, result)
        write_ledger_csv(
            out_dir / f"ledger_{safe_name(feature_set)}.csv", config, sim
        )
        sim_results.append((feature_set, sim))
    write_simulation_json(out_dir / "simulation_summary.json", config, sim_results)
    return sim_results


__all__ = [
    "Dataset",
    "FeatureSetResult",
    "make_provider",
    "load_dataset",
    "build_matrix",
    "run_feature_set",
    "simulate_feature_set",
    "run_train_eval",
    "run_simulate",
    "write_report_json",
    "write_metrics_csv",
    "write_predictions_csv",
    "write_ledger_csv",
    "write_simulation_json",
    "safe_name",
]
