#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixture dataset under fixtures/.

Fully deterministic: rerunning this script reproduces the committed
files byte for byte. The dataset is synthetic desk-scale data shaped
like the real inputs (weekday OHLCV bars for 2022-01..2023-03, tweets
with engagement, sparse news, and a replay score table covering every
post id).
"""

import json
import math
from datetime import date, timedelta
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "fixtures"

START = date(2022, 1, 3)
END = date(2023, 3, 31)

POSITIVE_BITS = [
    "earnings beat expectations, shares surge",
    "analysts upgrade $SYNT to strong buy 🚀",
    "record profit and growth this quarter #bullish",
    "momentum looks excellent, rally continues",
    "dividend raised again, investors optimistic",
]
NEGATIVE_BITS = [
    "revenue miss, stock drops hard 📉",
    "analysts downgrade $SYNT on weak guidance",
    "lawsuit fears trigger selloff #bearish",
    "profit warning, shares plunge",
    "layoffs announced, outlook negative",
]
NEUTRAL_BITS = [
    "watching $SYNT into the print https://example.com/chart",
    "volume flat today, range-bound session",
    "RT @trader: earnings call at 5pm",
    "quarterly report due next week",
    "no major catalysts on the calendar",
]
NEWS_BITS = [
    "Synthetic Corp reports quarterly results; profit outlook in focus",
    "Regulators open investigation into Synthetic Corp supply chain",
    "Synthetic Corp announces new product line, analysts upbeat",
    "Market volatility weighs on Synthetic Corp shares",
    "Synthetic Corp expands operations amid strong demand",
]


def weekdays(start, end):
    d = start
    while d <= end:
        if d.weekday() < 5:
            yield d
        d += timedelta(days=1)


def make_prices(days, rng):
    rows = []
    base = 100.0
    for i, d in enumerate(days):
        trend = 0.02 * i
        wave = 6.0 * math.sin(2 * math.pi * i / 60) + 3.0 * math.sin(2 * math.pi * i / 17)
        noise = rng.normal(0.0, 0.6)
        mid = base + trend + wave + noise
        spread = 0.004 * mid
        open_ = mid - spread * math.sin(i / 3.0)
        close = mid + spread * math.cos(i / 5.0)
        high = max(open_, close) * (1.0 + 0.003 + 0.002 * rng.random())
        low = min(open_, close) * (1.0 - 0.003 - 0.002 * rng.random())
        adj = close * 0.985
        volume = int(1_000_000 * (1.4 + 0.5 * math.sin(i / 7.0)) + rng.integers(0, 50_000))
        rows.append((d, open_, high, low, close, adj, volume))
    return rows


def write_prices(rows):
    lines = ["Date,Open,High,Low,Close,Adj Close,Volume"]
    for d, o, h, l, c, a, v in rows:
        lines.append(f"{d.isoformat()},{o:.4f},{h:.4f},{l:.4f},{c:.4f},{a:.4f},{v}")
    (OUT / "prices.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_tweets(days, rng):
    posts = []
    serial = 0
    all_days = []
    d = START
    while d <= END:  # tweets land on weekends too
        all_days.append(d)
        d += timedelta(days=1)
    for i, d in enumerate(all_days):
        n = int(rng.integers(0, 4))
        for j in range(n):
            serial += 1
            mood = rng.random()
            if mood < 0.4:
                text = POSITIVE_BITS[serial % len(POSITIVE_BITS)]
            elif mood < 0.7:
                text = NEGATIVE_BITS[serial % len(NEGATIVE_BITS)]
            else:
                text = NEUTRAL_BITS[serial % len(NEUTRAL_BITS)]
            likes = int(rng.integers(40, 4000))  # some fall under the 100-likes filter
            posts.append({
                "id": f"t{serial:06d}",
                "ts": f"{d.isoformat()}T{int(rng.integers(0, 24)):02d}:"
                      f"{int(rng.integers(0, 60)):02d}:00+00:00",
                "text": text,
                "retweets": int(rng.integers(0, 400)),
                "likes": likes,
                "comments": int(rng.integers(0, 150)),
                "followers": int(rng.integers(500, 800_000)),
                "kind": "tweet",
            })
    return posts


def make_news(rng):
    posts = []
    serial = 0
    d = START
    while d <= END:
        if serial % 1 == 0 and rng.random() < 0.35:
            serial += 1
            posts.append({
                "id": f"n{serial:04d}",
                "ts": f"{d.isoformat()}T{int(rng.integers(6, 22)):02d}:00:00+00:00",
                "text": NEWS_BITS[serial % len(NEWS_BITS)],
                "kind": "news",
            })
        d += timedelta(days=int(rng.integers(1, 4)))
    return posts


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def make_replay_scores(posts, rng):
    scores = []
    for post in posts:
        u = rng.random()
        label = 1 if u < 0.4 else (-1 if u < 0.7 else 0)
        conf = round(0.5 + 0.5 * rng.random(), 4)
        scores.append({"id": post["id"], "label": label, "confidence": conf})
    return scores


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20220103)
    days = list(weekdays(START, END))
    write_prices(make_prices(days, rng))
    tweets = make_tweets(days, rng)
    news = make_news(rng)
    write_jsonl(OUT / "tweets.jsonl", tweets)
    write_jsonl(OUT / "news.jsonl", news)
    write_jsonl(OUT / "replay_scores.jsonl", make_replay_scores(tweets + news, rng))
    print(f"{len(days)} bars, {len(tweets)} tweets, {len(news)} news -> {OUT}")


if __name__ == "__main__":
    main()
