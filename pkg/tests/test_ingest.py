"""Loader, calendar and forward-fill contracts."""

import json
from datetime import date

import pytest
from hypothesis import given, strategies as st

from stockcast.errors import (
    DuplicateDate,
    MissingColumn,
    MissingField,
    NonMonotonicDate,
    NoPriorValue,
    UnparsableLine,
    UnparsableRow,
)
from stockcast.ingest import (
    TradingCalendar,
    assign_posts,
    calendar_from_bars,
    forward_fill,
    load_posts_jsonl,
    load_price_csv,
    write_price_csv,
)

from conftest import make_post

HEADER = "Date,Open,High,Low,Close,Adj Close,Volume"


def write_csv(tmp_path, rows, header=HEADER):
    path = tmp_path / "prices.csv"
    path.write_text("\n".join([header, *rows]) + "\n")
    return path


class TestLoadPriceCsv:
    def test_field_mapping(self, tmp_path):
        path = write_csv(tmp_path, ["2023-01-03,100,105,99,104,104,5000"])
        (bar,) = load_price_csv(path)
        assert bar.date == date(2023, 1, 3)
        assert (bar.open, bar.high, bar.low, bar.close) == (100, 105, 99, 104)
        assert bar.adj_close == 104 and bar.volume == 5000

    def test_high_below_open_rejected(self, tmp_path):
        path = write_csv(tmp_path, ["2023-01-03,100,98,95,97,97,5000"])
        with pytest.raises(UnparsableRow) as exc:
            load_price_csv(path)
        assert exc.value.line == 2

    def test_five_row_fixture_sorted(self, tmp_path):
        rows = [
            f"2023-01-{d:02d},100,105,99,104,104,5000" for d in (3, 4, 5, 6, 9)
        ]
        bars = load_price_csv(write_csv(tmp_path, rows))
        assert len(bars) == 5
        assert [b.date for b in bars] == sorted(b.date for b in bars)

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path, ["2023-01-03,100,105,99,104,5000"],
                         header="Date,Open,High,Low,Close,Volume")
        with pytest.raises(MissingColumn) as exc:
            load_price_csv(path)
        assert exc.value.column == "Adj Close"

    def test_duplicate_date(self, tmp_path):
        rows = ["2023-01-03,100,105,99,104,104,5000"] * 2
        with pytest.raises(DuplicateDate):
            load_price_csv(write_csv(tmp_path, rows))

    def test_non_monotonic_date(self, tmp_path):
        rows = [
            "2023-01-04,100,105,99,104,104,5000",
            "2023-01-03,100,105,99,104,104,5000",
        ]
        with pytest.raises(NonMonotonicDate):
            load_price_csv(write_csv(tmp_path, rows))

    def test_negative_volume_rejected(self, tmp_path):
        with pytest.raises(UnparsableRow):
            load_price_csv(write_csv(tmp_path, ["2023-01-03,100,105,99,104,104,-1"]))

    def test_round_trip(self, tmp_path, fixtures_dir):
        bars = load_price_csv(fixtures_dir / "prices.csv")
        out = tmp_path / "rt.csv"
        write_price_csv(out, bars)
        assert load_price_csv(out) == bars


class TestLoadPostsJsonl:
    def write_jsonl(self, tmp_path, records):
        path = tmp_path / "posts.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        return path

    def test_tweet_mapping(self, tmp_path):
        path = self.write_jsonl(tmp_path, [{
            "id": "t1", "ts": "2023-01-03T12:00:00+00:00", "text": "hello",
            "retweets": 10, "likes": 250, "comments": 5, "followers": 8000,
        }])
        (post,) = load_posts_jsonl(path, "tweet")
        assert (post.retweets, post.likes, post.comments, post.followers) == (10, 250, 5, 8000)
        assert post.kind == "tweet"

    def test_news_defaults_to_zero_counts(self, tmp_path):
        path = self.write_jsonl(tmp_path, [
            {"id": "n1", "ts": "2023-01-03T12:00:00Z", "text": "headline"},
        ])
        (post,) = load_posts_jsonl(path, "news")
        assert (post.retweets, post.likes, post.comments, post.followers) == (0, 0, 0, 0)
        assert post.kind == "news"

    def test_min_likes_filter(self, tmp_path):
        records = [
            {"id": f"t{i}", "ts": "2023-01-03T12:00:00Z", "text": "x", "likes": likes}
            for i, likes in enumerate((50, 100, 150))
        ]
        posts = load_posts_jsonl(self.write_jsonl(tmp_path, records), "tweet",
                                 min_likes=100)
        assert [p.likes for p in posts] == [100, 150]

    def test_unparsable_line_numbered(self, tmp_path):
        path = tmp_path / "posts.jsonl"
        path.write_text('{"id": "a", "ts": "2023-01-03T00:00:00Z", "text": "x"}\nnot json\n')
        with pytest.raises(UnparsableLine) as exc:
            load_posts_jsonl(path, "tweet")
        assert exc.value.line == 2

    def test_missing_field(self, tmp_path):
        path = self.write_jsonl(tmp_path, [{"id": "a", "text": "x"}])
        with pytest.raises(MissingField) as exc:
            load_posts_jsonl(path, "tweet")
        assert exc.value.name == "ts"

    def test_duplicate_ids_keep_first(self, tmp_path):
        records = [
            {"id": "dup", "ts": "2023-01-03T12:00:00Z", "text": "first"},
            {"id": "dup", "ts": "2023-01-04T12:00:00Z", "text": "second"},
        ]
        posts = load_posts_jsonl(self.write_jsonl(tmp_path, records), "tweet")
        assert len(posts) == 1 and posts[0].text == "first"


class TestCalendar:
    def test_assign_rolls_forward_to_next_session(self):
        cal = TradingCalendar([date(2023, 1, 6), date(2023, 1, 9)])  # Fri, Mon
        assert cal.assign(date(2023, 1, 7)) == date(2023, 1, 9)  # Saturday
        assert cal.assign(date(2023, 1, 6)) == date(2023, 1, 6)
        assert cal.assign(date(2023, 1, 10)) is None

    def test_assign_posts_drops_past_calendar_end(self):
        cal = TradingCalendar([date(2023, 1, 6)])
        posts = [make_post("a", date(2023, 1, 5)), make_post("b", date(2023, 1, 10))]
        assigned = assign_posts(posts, cal)
        assert [p.id for p in assigned[date(2023, 1, 6)]] == ["a"]

    def test_non_monotonic_rejected(self):
        with pytest.raises(NonMonotonicDate):
            TradingCalendar([date(2023, 1, 9), date(2023, 1, 6)])


class TestForwardFill:
    D = [date(2023, 1, d) for d in (3, 4, 5)]

    def test_gap_filled_from_prior(self):
        cal = TradingCalendar(self.D)
        filled = forward_fill(cal, {self.D[0]: 5.0, self.D[2]: 7.0})
        assert filled == {self.D[0]: 5.0, self.D[1]: 5.0, self.D[2]: 7.0}

    def test_full_series_unchanged(self):
        cal = TradingCalendar(self.D)
        series = {d: float(i) for i, d in enumerate(self.D)}
        assert forward_fill(cal, series) == series

    def test_no_prior_value(self):
        cal = TradingCalendar(self.D[:2])
        with pytest.raises(NoPriorValue) as exc:
            forward_fill(cal, {self.D[1]: 3.0})
        assert exc.value.date == self.D[0]

    def test_initial_value_fallback(self):
        cal = TradingCalendar(self.D[:2])
        filled = forward_fill(cal, {self.D[1]: 3.0}, initial=1.0)
        assert filled == {self.D[0]: 1.0, self.D[1]: 3.0}

    @given(st.dictionaries(st.integers(0, 19), st.floats(-1e6, 1e6), min_size=1))
    def test_idempotent(self, sparse):
        days = [date(2020, 1, 1 + i) for i in range(20)]
        cal = TradingCalendar(days)
        series = {days[i]: v for i, v in sparse.items()}
        once = forward_fill(cal, series, initial=0.0)
        assert forward_fill(cal, once) == once


def test_calendar_matches_price_file(fixtures_dir):
    bars = load_price_csv(fixtures_dir / "prices.csv")
    cal = calendar_from_bars(bars)
    assert list(cal) == [b.date for b in bars]
    assert cal.first() == bars[0].date and cal.last() == bars[-1].date
