"""Tokenization and per-text feature vectors.

Every rate is a percentage of the word count, punctuation included (marks per
word x 100). A text without words maps to the all-zero vector.
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .corpus import Post, PostKind, Profile
from .errors import BindingError
from .lexicon import Lexicon, categorize

# decimal numbers first so "3,5" stays one token, but only a lone separator:
# "1,2,3" is a list of three numerals. Then runs of letters, digits and
# apostrophes holding at least one letter or digit.
TOKEN_RE = re.compile(r"(?<!\d[.,])\d+[.,]\d+(?![.,]\d)(?![^\W_])|'*[^\W_](?:[^\W_]|')*")
NUMERIC_RE = re.compile(r"\d+(?:[.,]\d+)?")

PUNCTUATION = {
    "question_mark": "?",
    "exclamation_mark": "!",
    "comma": ",",
    "period": ".",
    "colon": ":",
    "semicolon": ";",
}

STRUCTURAL_FEATURES = (
    "word_count",
    "question_marks_pct",
    "commas_pct",
    "numerals_pct",
    "six_letter_pct",
)


class Tokens(NamedTuple):
    words: list[str]
    punct_counts: dict[str, int]


@dataclass(frozen=True)
class FeatureVector:
    word_count: int = 0
    category_pct: dict[str, float] = field(default_factory=dict)
    question_marks_pct: float = 0.0
    commas_pct: float = 0.0
    numerals_pct: float = 0.0
    six_letter_pct: float = 0.0

    def feature(self, name: str) -> float:
        """Value of a structural field or lexicon category by name."""
        if name in STRUCTURAL_FEATURES:
            return float(getattr(self, name))
        try:
            return self.category_pct[name]
        except KeyError:
            raise BindingError(f"feature {name!r} is neither a structural feature nor a lexicon category") from None

    def as_row(self) -> dict[str, float | int]:
        row: dict[str, float | int] = {name: getattr(self, name) for name in STRUCTURAL_FEATURES}
        row.update(sorted(self.category_pct.items()))
        return row


def is_numeric(token: str) -> bool:
    return NUMERIC_RE.fullmatch(token) is not None


def letter_count(token: str) -> int:
    return sum(1 for ch in token if ch.isalpha())


def tokenize(text: str) -> Tokens:
    words = [m.group(0).lower() for m in TOKEN_RE.finditer(text)]
    rest = TOKEN_RE.sub(" ", text)
    punct = {name: rest.count(mark) for name, mark in PUNCTUATION.items()}
    return Tokens(words, punct)


def _pct(count: int, total: int) -> float:
    return 100.0 * count / total if total else 0.0


def analyze_text(text: str, lexicon: Lexicon) -> FeatureVector:
    words, punct = tokenize(text)
    n = len(words)
    hits: Counter[str] = Counter()
    numerals = long_words = 0
    for word in words:
        # a word counts once per category however many patterns match it
        hits.update(categorize(lexicon, word))
        if is_numeric(word):
            numerals += 1
        if letter_count(word) > 6:
            long_words += 1

    return FeatureVector(
        word_count=n,
        category_pct={c: _pct(hits[c], n) for c in lexicon.categories},
        question_marks_pct=_pct(punct["question_mark"], n),
        commas_pct=_pct(punct["comma"], n),
        numerals_pct=_pct(numerals, n),
        six_letter_pct=_pct(long_words, n),
    )


def profile_narration(profile: Profile) -> str:
    """All text posts of a profile joined as one narration, in stored order."""
    return "\n".join(post.text for post in profile.posts if post.kind is PostKind.TEXT)


def analyze_profile(profile: Profile, lexicon: Lexicon) -> FeatureVector:
    return analyze_text(profile_narration(profile), lexicon)


def analyze_post(post: Post, lexicon: Lexicon) -> FeatureVector:
    return analyze_text(post.text, lexicon)
