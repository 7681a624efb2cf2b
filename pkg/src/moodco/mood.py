"""Positive/Negative Mood Indicators, mood labels and the self-presentation score.

The two indicators are signed sums of feature percentages::

    negative = NE + SW + AW + SaW - Nu + TP
    positive = PF + PE + Fa + QM

Symbols are bound to lexicon categories or structural features through a
bindings mapping; ``DEFAULT_BINDINGS`` matches the shipped micro-lexicon.
"""

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .errors import BindingError, ConfigError, DegenerateStatisticsError
from .lexicon import Lexicon
from .stats import is_constant
from .textfeatures import STRUCTURAL_FEATURES, FeatureVector

if TYPE_CHECKING:
    from .pipeline import Predictor


class MoodLabel(StrEnum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class TiePolicy(StrEnum):
    NEUTRAL = "neutral"
    POSITIVE = "positive"
    NEGATIVE = "negative"


NEGATIVE_TERMS: tuple[tuple[str, int], ...] = (
    ("NE", 1),
    ("SW", 1),
    ("AW", 1),
    ("SaW", 1),
    ("Nu", -1),
    ("TP", 1),
)
POSITIVE_TERMS: tuple[tuple[str, int], ...] = (
    ("PF", 1),
    ("PE", 1),
    ("Fa", 1),
    ("QM", 1),
)
SYMBOLS = tuple(s for s, _ in NEGATIVE_TERMS + POSITIVE_TERMS)

DEFAULT_BINDINGS: Mapping[str, str] = {
    "NE": "negative_emotion",
    "SW": "swear",
    "AW": "anger",
    "SaW": "sadness",
    "Nu": "numerals_pct",
    "TP": "third_person_plural_verb",
    "PF": "positive_feeling",
    "PE": "positive_emotion",
    "Fa": "family",
    "QM": "question_marks_pct",
}


@dataclass(frozen=True)
class MoodScores:
    positive: float = 0.0
    negative: float = 0.0


@dataclass(frozen=True)
class MoodModel:
    """Two signed feature sums; each term is ``(feature_name, +1 | -1)``."""

    positive_terms: tuple[tuple[str, int], ...]
    negative_terms: tuple[tuple[str, int], ...]

    @classmethod
    def from_bindings(cls, bindings: Mapping[str, str] | None = None) -> "MoodModel":
        merged = dict(DEFAULT_BINDINGS)
        if bindings:
            unknown = set(bindings) - set(SYMBOLS)
            if unknown:
                raise BindingError(f"unknown mood symbols: {', '.join(sorted(unknown))}")
            merged.update(bindings)

        def resolve(terms):
            return tuple((merged[symbol], sign) for symbol, sign in terms)

        return cls(positive_terms=resolve(POSITIVE_TERMS), negative_terms=resolve(NEGATIVE_TERMS))

    @classmethod
    def from_predictors(cls, predictors: Iterable["Predictor"]) -> "MoodModel":
        """Indicators built from the discriminating predictors of feature selection.

        Predictors targeting the neutral condition are dropped, as the neutral
        indicator is not used.
        """
        positive, negative = [], []
        for p in predictors:
            if not p.discriminating:
                continue
            term = (p.category, 1 if p.sign == "+" else -1)
            if p.target_mood == MoodLabel.POSITIVE:
                positive.append(term)
            elif p.target_mood == MoodLabel.NEGATIVE:
                negative.append(term)
        if not positive or not negative:
            raise ConfigError("feature selection produced no discriminating predictor for one of the moods")
        return cls(positive_terms=tuple(positive), negative_terms=tuple(negative))

    def features(self) -> set[str]:
        return {name for name, _ in self.positive_terms + self.negative_terms}

    def validate(self, lexicon: Lexicon) -> None:
        """Raise BindingError when a term names a feature the lexicon cannot produce."""
        available = set(STRUCTURAL_FEATURES) | set(lexicon.categories)
        missing = sorted(self.features() - available)
        if missing:
            raise BindingError(f"mood terms bound to unknown features: {', '.join(missing)}")

    def score(self, fv: FeatureVector) -> MoodScores:
        return MoodScores(
            positive=_signed_sum(fv, self.positive_terms),
            negative=_signed_sum(fv, self.negative_terms),
        )


DEFAULT_MODEL = MoodModel.from_bindings()


def _signed_sum(fv: FeatureVector, terms: Sequence[tuple[str, int]]) -> float:
    total = 0.0
    for name, sign in terms:
        total += sign * fv.feature(name)
    # avoid -0.0 in reports
    return total + 0.0


def negative_mood_score(fv: FeatureVector, bindings: Mapping[str, str] | None = None) -> float:
    model = DEFAULT_MODEL if bindings is None else MoodModel.from_bindings(bindings)
    return _signed_sum(fv, model.negative_terms)


def positive_mood_score(fv: FeatureVector, bindings: Mapping[str, str] | None = None) -> float:
    model = DEFAULT_MODEL if bindings is None else MoodModel.from_bindings(bindings)
    return _signed_sum(fv, model.positive_terms)


def classify_mood(scores: MoodScores, tie_policy: TiePolicy | str = TiePolicy.NEUTRAL) -> MoodLabel:
    if scores.positive == 0 and scores.negative == 0:
        return MoodLabel.NEUTRAL
    if scores.positive > scores.negative:
        return MoodLabel.POSITIVE
    if scores.negative > scores.positive:
        return MoodLabel.NEGATIVE
    return MoodLabel(TiePolicy(tie_policy).value)


@dataclass(frozen=True)
class SelfPresentationModel:
    """Linear model over z-scored word count and sexual-word percentage."""

    word_count_z: float = 1.0
    sexual_z: float = 1.0
    intercept: float = 0.0
    word_count_feature: str = "word_count"
    sexual_feature: str = "sexual"


@dataclass(frozen=True)
class CorpusStats:
    word_count_mean: float
    word_count_sd: float
    sexual_mean: float
    sexual_sd: float

    @classmethod
    def from_features(cls, features: Sequence[FeatureVector], model: SelfPresentationModel = SelfPresentationModel()) -> "CorpusStats":
        """Population mean and SD of the two model inputs over profile vectors."""
        if len(features) < 2:
            raise DegenerateStatisticsError("self-presentation statistics need at least 2 profiles")
        wc = np.array([fv.feature(model.word_count_feature) for fv in features], dtype=float)
        sx = np.array([fv.feature(model.sexual_feature) for fv in features], dtype=float)
        for name, values in ((model.word_count_feature, wc), (model.sexual_feature, sx)):
            if is_constant(values):
                raise DegenerateStatisticsError(f"zero variance in {name} across profiles")
        return cls(float(wc.mean()), float(wc.std()), float(sx.mean()), float(sx.std()))


def self_presentation_score(fv: FeatureVector, model: SelfPresentationModel, corpus_stats: CorpusStats) -> float:
    if corpus_stats.word_count_sd <= 0 or corpus_stats.sexual_sd <= 0:
        raise DegenerateStatisticsError("self-presentation statistics have zero variance")
    z_wc = (fv.feature(model.word_count_feature) - corpus_stats.word_count_mean) / corpus_stats.word_count_sd
    z_sx = (fv.feature(model.sexual_feature) - corpus_stats.sexual_mean) / corpus_stats.sexual_sd
    return model.intercept + model.word_count_z * z_wc + model.sexual_z * z_sx
