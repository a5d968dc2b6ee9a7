"""Tweet/news text cleaning ahead of sentiment scoring.

Fixed pipeline order:

    1. strip URLs
    2. strip hashtags, mentions, platform reserved words (RT/FAV/via);
       cashtags are normalized to the bare ticker (or stripped, see
       ``keep_cashtags``)
    3. strip emoji and pictographic symbols
    4. lowercase
    5. delete punctuation, special characters and digits
    6. remove stopwords (and any reserved word the punctuation pass
       may have reassembled, which keeps cleaning idempotent)
    7. collapse whitespace

Output is lowercase words separated by single spaces; an empty string is
a valid result.
"""

from __future__ import annotations

import re
from importlib import resources

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)")
_HASHTAG_RE = re.compile(r"#\S+")
_MENTION_RE = re.compile(r"@\S+")
_CASHTAG_RE = re.compile(r"\$([A-Za-z][A-Za-z0-9]*)")
_CASHTAG_STRIP_RE = re.compile(r"\$[A-Za-z]\S*")

# Platform tokens carrying no sentiment: retweet/favourite markers and the
# attribution particle.
RESERVED_WORDS = frozenset({"rt", "fav", "via"})

_RESERVED_RE = re.compile(
    r"(?<!\S)(?:" + "|".join(sorted(RESERVED_WORDS)) + r")(?!\S)", re.IGNORECASE
)

# Pictographic blocks: emoticons, symbols, transport, flags, supplemental
# symbols, dingbats, plus variation selector and ZWJ used in sequences.
_EMOJI_RE = re.compile(
    "["
    "\U0001F1E6-\U0001F1FF"
    "\U0001F300-\U0001FAFF"
    "☀-➿"
    "⬀-⯿"
    "️"
    "‍"
    "]"
)

_NON_ALPHA_RE = re.compile(r"[^a-z\s]+")
_WS_RE = re.compile(r"\s+")


def load_stopwords(path=None):
    """Load the stopword set: one lowercase word per line, '#' comments.

    Without a path, the bundled English list is used.
    """
    if path is None:
        text = resources.files("stockcast.resources").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


def clean_text(raw, stopwords, keep_cashtags=True):
    """Clean one raw post text down to lowercase word tokens.

    Args:
        raw: the post text as collected.
        stopwords: set of lowercase words to drop.
        keep_cashtags: when True, "$MSFT" survives as the token "msft";
            when False the whole cashtag is stripped like a hashtag.

    Returns:
        Cleaned string; possibly empty.
    """
    text = _URL_RE.sub(" ", raw)
    if keep_cashtags:
        text = _CASHTAG_RE.sub(r"\1", text)
    else:
        text = _CASHTAG_STRIP_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _RESERVED_RE.sub(" ", text)
    text = _EMOJI_RE.sub("", text)
    text = text.lower()
    # Deleting (not spacing) keeps "don't" a single token; whitespace is
    # preserved as the token separator.
    text = _NON_ALPHA_RE.sub("", text)
    tokens = [
        tok
        for tok in _WS_RE.split(text)
        if tok and tok not in stopwords and tok not in RESERVED_WORDS
    ]
    return " ".join(tokens)


__all__ = ["clean_text", "load_stopwords", "RESERVED_WORDS"]
