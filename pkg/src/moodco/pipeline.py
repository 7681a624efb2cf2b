"""End-to-end analyses over a scored corpus.

1. Metric development: ``select_features`` over a labelled criterion sample.
2. Post-group comparisons: bootstrap-balanced t-tests between mood groups.
3. Emotional coherence: per-profile post x comment mood chi-square.
4. Empathy split: median split on chi-square and group comparisons of profile
   metrics, LIWC categories and self-presentation.
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import FacebookMetrics, Gender, Profile, eligible_posts
from .errors import CorpusFormatError, DataError, DegenerateStatisticsError, MissingMetricsError, UnbalancedSampleError
from .lexicon import Lexicon
from .mood import (
    DEFAULT_MODEL,
    CorpusStats,
    MoodLabel,
    MoodModel,
    MoodScores,
    SelfPresentationModel,
    TiePolicy,
    classify_mood,
    self_presentation_score,
)
from .reports import format_csv
from .stats import (
    ContingencyTable,
    TestResult,
    anova_table,
    bootstrap_balance,
    chi_square,
    describe,
    make_rng,
    median_split,
    pearson_r,
    scheffe_pairwise,
    spawn_rngs,
    t_test_independent,
    zscores,
)
from .textfeatures import FeatureVector, analyze_text

logger = logging.getLogger(__name__)

CONDITIONS = (MoodLabel.POSITIVE, MoodLabel.NEGATIVE, MoodLabel.NEUTRAL)
POLAR = (MoodLabel.POSITIVE, MoodLabel.NEGATIVE)
STRUCTURAL_VARIABLES = ("numerals_pct", "question_marks_pct", "commas_pct", "six_letter_pct")
POST_VARIABLES = ("likes", "n_comments", "comment_pos_score", "comment_neg_score")
POOLED_ID = "pooled"


# -- metric development ------------------------------------------------------


@dataclass(frozen=True)
class CriterionSample:
    posts: tuple[tuple[str, MoodLabel], ...]

    @property
    def counts(self) -> dict[MoodLabel, int]:
        counts = {label: 0 for label in CONDITIONS}
        for _, label in self.posts:
            counts[label] += 1
        return counts

    @property
    def balanced(self) -> bool:
        return len(set(self.counts.values())) == 1

    def texts(self) -> list[str]:
        return [text for text, _ in self.posts]


def load_criterion_sample(path: Path | str) -> CriterionSample:
    """Read a ``text,label`` CSV with header."""
    path = Path(path)
    posts = []
    try:
        with path.open("r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or not {"text", "label"} <= set(reader.fieldnames):
                raise CorpusFormatError(path, 1, "criterion CSV needs a 'text,label' header")
            for lineno, row in enumerate(reader, start=2):
                try:
                    label = MoodLabel(row["label"].strip().lower())
                except (ValueError, AttributeError):
                    raise CorpusFormatError(path, lineno, f"unknown label {row['label']!r}") from None
                posts.append((row["text"] or "", label))
    except OSError as e:
        raise CorpusFormatError(path, None, f"cannot read criterion sample: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusFormatError(path, None, f"criterion sample is not UTF-8: {e}") from e
    except csv.Error as e:
        raise CorpusFormatError(path, reader.line_num, f"malformed CSV: {e}") from e
    return CriterionSample(tuple(posts))


def criterion_sample_csv(sample: CriterionSample) -> str:
    return format_csv(({"text": t, "label": l} for t, l in sample.posts), ("text", "label"))


@dataclass(frozen=True)
class Predictor:
    category: str
    f: float
    p_value: float
    df: tuple[int, int]
    sum_of_squares: float
    target_mood: MoodLabel
    sign: str
    z_by_condition: dict[str, float]
    mean_by_condition: dict[str, float]
    discriminating: bool


@dataclass(frozen=True)
class SelectedPredictors:
    predictors: tuple[Predictor, ...]
    alpha: float
    scheffe_alpha: float
    skipped: tuple[str, ...] = ()

    def by_category(self) -> dict[str, Predictor]:
        return {p.category: p for p in self.predictors}

    def mood_model(self) -> MoodModel:
        return MoodModel.from_predictors(self.predictors)


def default_variables(features: Sequence[FeatureVector]) -> list[str]:
    categories = sorted(features[0].category_pct) if features else []
    return categories + list(STRUCTURAL_VARIABLES)


def select_features(
    sample: CriterionSample,
    features: Sequence[FeatureVector],
    alpha: float = 0.01,
    *,
    scheffe_alpha: float = 0.05,
    variables: Sequence[str] | None = None,
) -> SelectedPredictors:
    """ANOVA across the three labelled conditions for every variable.

    Variables with ``p < alpha`` (all of them when ``alpha >= 1``) are kept and
    sorted by descending F. The target mood is the condition whose mean has the
    largest absolute z-score; the sign is that z-score's sign. A predictor is
    discriminating when Scheffé separates the target from both other conditions.
    """
    if len(features) != len(sample.posts):
        raise DataError(f"{len(features)} feature vectors for {len(sample.posts)} criterion posts")
    counts = sample.counts
    if not sample.balanced:
        raise UnbalancedSampleError(
            "criterion sample is unbalanced: " + ", ".join(f"{k.value}={v}" for k, v in counts.items())
        )
    if min(counts.values()) < 2:
        raise UnbalancedSampleError("criterion sample needs at least 2 posts per label")

    variables = list(variables) if variables is not None else default_variables(features)
    labels = [label for _, label in sample.posts]
    predictors: list[Predictor] = []
    skipped: list[str] = []

    for var in variables:
        values = [fv.feature(var) for fv in features]
        groups = [[v for v, lab in zip(values, labels) if lab == cond] for cond in CONDITIONS]
        try:
            table = anova_table(groups)
            result = table.result
            if not (alpha >= 1.0 or result.p_value < alpha):
                continue
            scheffe = scheffe_pairwise(groups, alpha=scheffe_alpha)
            z = zscores(scheffe.means)
        except DegenerateStatisticsError as e:
            logger.warning("Skipping %s: %s", var, e)
            skipped.append(var)
            continue

        target = int(np.argmax(np.abs(z)))
        others = [i for i in range(len(CONDITIONS)) if i != target]
        predictors.append(
            Predictor(
                category=var,
                f=result.statistic,
                p_value=result.p_value,
                df=(table.df_between, table.df_within),
                sum_of_squares=table.ss_between,
                target_mood=CONDITIONS[target],
                sign="+" if z[target] > 0 else "-",
                z_by_condition={c.value: zi for c, zi in zip(CONDITIONS, z)},
                mean_by_condition={c.value: m for c, m in zip(CONDITIONS, scheffe.means)},
                discriminating=all(scheffe.significant(target, o) for o in others),
            )
        )

    predictors.sort(key=lambda p: (-p.f, p.category))
    return SelectedPredictors(tuple(predictors), alpha, scheffe_alpha, tuple(skipped))


def analyze_criterion_sample(sample: CriterionSample, lexicon: Lexicon) -> list[FeatureVector]:
    return [analyze_text(text, lexicon) for text in sample.texts()]


# -- scoring -----------------------------------------------------------------


@dataclass(frozen=True)
class ScoredComment:
    comment_id: str
    word_count: int
    scores: MoodScores
    label: MoodLabel


@dataclass(frozen=True)
class ScoredPost:
    profile_id: str
    post_id: str
    likes: int
    word_count: int
    scores: MoodScores
    label: MoodLabel
    comments: tuple[ScoredComment, ...] = ()

    @property
    def n_comments(self) -> int:
        return len(self.comments)

    @property
    def comment_pos_score(self) -> float:
        """Mean positive indicator over this post's comments, 0 without comments."""
        if not self.comments:
            return 0.0
        return float(np.mean([c.scores.positive for c in self.comments]))

    @property
    def comment_neg_score(self) -> float:
        if not self.comments:
            return 0.0
        return float(np.mean([c.scores.negative for c in self.comments]))

    def variable(self, name: str) -> float:
        if name not in POST_VARIABLES:
            raise ValueError(f"unknown post variable {name!r}")
        return float(getattr(self, name))


@dataclass(frozen=True)
class ProfileScores:
    profile_id: str
    gender: Gender
    posts: tuple[ScoredPost, ...]
    total_posts: int
    total_comments: int


@dataclass(frozen=True)
class Descriptive:
    mean: float
    sd: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "Descriptive":
        return cls(*describe(values))


@dataclass(frozen=True)
class ScoringSummary:
    total_posts: int
    eligible_posts: int
    non_neutral_posts: int
    positive_posts: int
    negative_posts: int
    neutral_posts: int
    total_comments: int
    eligible_comments: int
    non_neutral_comments: int
    positive_comments: int
    negative_comments: int
    neutral_comments: int
    post_descriptives: dict[str, Descriptive] = field(default_factory=dict)
    comment_descriptives: dict[str, Descriptive] = field(default_factory=dict)


@dataclass(frozen=True)
class CorpusScores:
    profiles: tuple[ProfileScores, ...]
    summary: ScoringSummary

    def posts(self) -> list[ScoredPost]:
        return [post for profile in self.profiles for post in profile.posts]


def _score_text(text: str, lexicon: Lexicon, model: MoodModel, tie_policy: TiePolicy) -> tuple[int, MoodScores, MoodLabel]:
    fv = analyze_text(text, lexicon)
    scores = model.score(fv)
    return fv.word_count, scores, classify_mood(scores, tie_policy)


def score_profile(
    profile: Profile,
    lexicon: Lexicon,
    model: MoodModel = DEFAULT_MODEL,
    tie_policy: TiePolicy = TiePolicy.NEUTRAL,
    require_comments: bool = True,
) -> ProfileScores:
    scored = []
    for post in eligible_posts(profile, require_comments):
        wc, scores, label = _score_text(post.text, lexicon, model, tie_policy)
        comments = tuple(
            ScoredComment(c.comment_id, *_score_text(c.text, lexicon, model, tie_policy)) for c in post.comments
        )
        scored.append(ScoredPost(profile.profile_id, post.post_id, post.likes, wc, scores, label, comments))
    return ProfileScores(
        profile_id=profile.profile_id,
        gender=profile.gender,
        posts=tuple(scored),
        total_posts=len(profile.posts),
        total_comments=sum(len(p.comments) for p in profile.posts),
    )


def summarize_scores(profiles: Sequence[ProfileScores]) -> ScoringSummary:
    posts = [p for prof in profiles for p in prof.posts]
    comments = [c for p in posts for c in p.comments]

    def count(items, label):
        return sum(1 for item in items if item.label == label)

    return ScoringSummary(
        total_posts=sum(p.total_posts for p in profiles),
        eligible_posts=len(posts),
        non_neutral_posts=len(posts) - count(posts, MoodLabel.NEUTRAL),
        positive_posts=count(posts, MoodLabel.POSITIVE),
        negative_posts=count(posts, MoodLabel.NEGATIVE),
        neutral_posts=count(posts, MoodLabel.NEUTRAL),
        total_comments=sum(p.total_comments for p in profiles),
        eligible_comments=len(comments),
        non_neutral_comments=len(comments) - count(comments, MoodLabel.NEUTRAL),
        positive_comments=count(comments, MoodLabel.POSITIVE),
        negative_comments=count(comments, MoodLabel.NEGATIVE),
        neutral_comments=count(comments, MoodLabel.NEUTRAL),
        post_descriptives={
            "likes": Descriptive.of([p.likes for p in posts]),
            "n_comments": Descriptive.of([p.n_comments for p in posts]),
            "positive_score": Descriptive.of([p.scores.positive for p in posts]),
            "negative_score": Descriptive.of([p.scores.negative for p in posts]),
        },
        comment_descriptives={
            "positive_score": Descriptive.of([c.scores.positive for c in comments]),
            "negative_score": Descriptive.of([c.scores.negative for c in comments]),
        },
    )


def score_corpus(
    profiles: Sequence[Profile],
    lexicon: Lexicon,
    model: MoodModel = DEFAULT_MODEL,
    *,
    tie_policy: TiePolicy = TiePolicy.NEUTRAL,
    require_comments: bool = True,
    jobs: int = 1,
) -> CorpusScores:
    """Score and label every eligible post and its comments.

    Output order follows the corpus, whatever ``jobs`` is.
    """
    model.validate(lexicon)
    work = partial(
        score_profile,
        lexicon=lexicon,
        model=model,
        tie_policy=TiePolicy(tie_policy),
        require_comments=require_comments,
    )
    if jobs > 1 and len(profiles) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scored = list(pool.map(work, profiles, chunksize=max(1, len(profiles) // (jobs * 4))))
    else:
        scored = [work(p) for p in profiles]
    summary = summarize_scores(scored)
    logger.info(
        "Scored %d eligible posts (%d positive, %d negative, %d neutral)",
        summary.eligible_posts,
        summary.positive_posts,
        summary.negative_posts,
        summary.neutral_posts,
    )
    return CorpusScores(tuple(scored), summary)


# -- post-group comparisons --------------------------------------------------


@dataclass(frozen=True)
class GroupComparison:
    """t(group_a, group_b); positive t means group_a has the larger mean."""

    variable: str
    group_a: str
    group_b: str
    n_a: int
    n_b: int
    mean_a: float
    sd_a: float
    mean_b: float
    sd_b: float
    result: TestResult | None
    error: str | None = None


def compare_groups(
    variable: str,
    values_a: Sequence[float],
    values_b: Sequence[float],
    group_a: str,
    group_b: str,
    *,
    pooled: bool = True,
) -> GroupComparison:
    mean_a, sd_a = describe(values_a)
    mean_b, sd_b = describe(values_b)
    result, error = None, None
    try:
        result = t_test_independent(values_a, values_b, pooled=pooled)
    except DegenerateStatisticsError as e:
        logger.warning("Skipping t-test on %s (%s vs %s): %s", variable, group_a, group_b, e)
        error = str(e)
    return GroupComparison(variable, group_a, group_b, len(values_a), len(values_b), mean_a, sd_a, mean_b, sd_b, result, error)


def compare_post_groups(
    posts_a: Sequence[ScoredPost],
    posts_b: Sequence[ScoredPost],
    variables: Sequence[str] = POST_VARIABLES,
    seed: int | np.random.Generator = 0,
    *,
    labels: tuple[str, str] = ("a", "b"),
    pooled: bool = True,
) -> list[GroupComparison]:
    """Resample the larger group to the smaller's size, then t-test each variable."""
    if not posts_a or not posts_b:
        raise DegenerateStatisticsError(f"cannot compare {labels[0]} vs {labels[1]}: empty group")
    rng = make_rng(seed)
    a, b = list(posts_a), list(posts_b)
    if len(a) > len(b):
        a = bootstrap_balance(a, len(b), rng)
    elif len(b) > len(a):
        b = bootstrap_balance(b, len(a), rng)
    return [
        compare_groups(var, [p.variable(var) for p in a], [p.variable(var) for p in b], *labels, pooled=pooled)
        for var in variables
    ]


def _stream(seed: int, index: int) -> np.random.Generator:
    return spawn_rngs(seed, index + 1)[index]


def compare_negative_vs_positive(scores: CorpusScores, seed: int = 0) -> list[GroupComparison]:
    posts = scores.posts()
    return compare_post_groups(
        [p for p in posts if p.label == MoodLabel.NEGATIVE],
        [p for p in posts if p.label == MoodLabel.POSITIVE],
        seed=_stream(seed, 0),
        labels=("negative", "positive"),
    )


def compare_emotional_vs_neutral(scores: CorpusScores, seed: int = 0) -> list[GroupComparison]:
    posts = scores.posts()
    return compare_post_groups(
        [p for p in posts if p.label == MoodLabel.NEUTRAL],
        [p for p in posts if p.label != MoodLabel.NEUTRAL],
        seed=_stream(seed, 1),
        labels=("neutral", "emotional"),
    )


def compare_female_vs_male(scores: CorpusScores, seed: int = 0) -> list[GroupComparison]:
    """Posts of female vs male profiles; profiles of unspecified gender are left out."""
    by_gender = {g: [p for prof in scores.profiles if prof.gender == g for p in prof.posts] for g in (Gender.FEMALE, Gender.MALE)}
    return compare_post_groups(
        by_gender[Gender.FEMALE],
        by_gender[Gender.MALE],
        seed=_stream(seed, 2),
        labels=("female", "male"),
    )


# -- emotional coherence -----------------------------------------------------


@dataclass(frozen=True)
class CoherenceResult:
    profile_id: str
    table: ContingencyTable
    chi2: float | None
    p_value: float | None
    df: int | None
    highly_empathetic: bool
    indeterminate: bool = False
    reason: str | None = None

    @property
    def empathy_score(self) -> float | None:
        return self.chi2


def _comment_mood(post: ScoredPost, tie_policy: TiePolicy) -> MoodLabel:
    """Label of the mean scores over a post's non-neutral comments."""
    polar = [c for c in post.comments if c.label != MoodLabel.NEUTRAL]
    if not polar:
        return MoodLabel.NEUTRAL
    mean = MoodScores(
        positive=float(np.mean([c.scores.positive for c in polar])),
        negative=float(np.mean([c.scores.negative for c in polar])),
    )
    return classify_mood(mean, tie_policy)


def coherence_table(
    posts: Iterable[ScoredPost],
    unit: str = "comment",
    tie_policy: TiePolicy = TiePolicy.NEUTRAL,
) -> ContingencyTable:
    """Post mood (rows) x comment mood (cols) over positive/negative labels only."""
    counts = {(r, c): 0 for r in POLAR for c in POLAR}
    for post in posts:
        if post.label == MoodLabel.NEUTRAL:
            continue
        if unit == "comment":
            for comment in post.comments:
                if comment.label != MoodLabel.NEUTRAL:
                    counts[post.label, comment.label] += 1
        elif unit == "post_mean":
            mood = _comment_mood(post, tie_policy)
            if mood != MoodLabel.NEUTRAL:
                counts[post.label, mood] += 1
        else:
            raise ValueError(f"unknown coherence unit {unit!r}")
    names = tuple(label.value for label in POLAR)
    return ContingencyTable(names, names, tuple(tuple(counts[r, c] for c in POLAR) for r in POLAR))


def coherence_from_table(profile_id: str, table: ContingencyTable, threshold: float = 4.0) -> CoherenceResult:
    if table.total == 0:
        return CoherenceResult(profile_id, table, None, None, None, False, True, "no non-neutral post/comment pairs")
    try:
        result = chi_square(table)
    except DegenerateStatisticsError as e:
        return CoherenceResult(profile_id, table, None, None, None, False, True, str(e))
    return CoherenceResult(profile_id, table, result.statistic, result.p_value, int(result.df), result.statistic >= threshold)


def coherence(
    profile: ProfileScores,
    *,
    threshold: float = 4.0,
    unit: str = "comment",
    tie_policy: TiePolicy = TiePolicy.NEUTRAL,
) -> CoherenceResult:
    result = coherence_from_table(profile.profile_id, coherence_table(profile.posts, unit, tie_policy), threshold)
    if result.indeterminate:
        logger.info("Profile %s is indeterminate: %s", profile.profile_id, result.reason)
    return result


def pooled_coherence(
    profiles: Sequence[ProfileScores],
    *,
    threshold: float = 4.0,
    unit: str = "comment",
    tie_policy: TiePolicy = TiePolicy.NEUTRAL,
) -> CoherenceResult:
    """One table summed over every profile."""
    table = coherence_table((p for prof in profiles for p in prof.posts), unit, tie_policy)
    return coherence_from_table(POOLED_ID, table, threshold)


# -- empathy split -----------------------------------------------------------


@dataclass(frozen=True)
class Correlation:
    variable: str
    n: int
    result: TestResult | None
    error: str | None = None


@dataclass(frozen=True)
class EmpathyReport:
    n_determinate: int
    median: float | None
    low: tuple[str, ...]
    high: tuple[str, ...]
    degenerate: bool
    comparisons: tuple[GroupComparison, ...] = ()
    correlations: tuple[Correlation, ...] = ()
    gender: GroupComparison | None = None


def profile_self_presentation(
    profile_features: Mapping[str, FeatureVector],
    model: SelfPresentationModel = SelfPresentationModel(),
) -> dict[str, float]:
    stats = CorpusStats.from_features(list(profile_features.values()), model)
    return {pid: self_presentation_score(fv, model, stats) for pid, fv in profile_features.items()}


def empathy_split_and_compare(
    coherence_results: Sequence[CoherenceResult],
    profile_features: Mapping[str, FeatureVector],
    facebook_metrics: Mapping[str, FacebookMetrics] | None = None,
    sp_scores: Mapping[str, float] | None = None,
    genders: Mapping[str, Gender] | None = None,
) -> EmpathyReport:
    """Low vs high empathy profiles, split at the median chi-square.

    Each comparison is t(low, high); each correlation is r(chi2, variable).
    Variables that are constant are skipped with a warning.
    """
    determinate = [r for r in coherence_results if not r.indeterminate and r.profile_id != POOLED_ID]
    if len(determinate) < 4:
        raise DegenerateStatisticsError(f"empathy split needs at least 4 determinate profiles, got {len(determinate)}")
    ids = [r.profile_id for r in determinate]
    chi2 = {r.profile_id: float(r.chi2) for r in determinate}

    split = median_split(chi2)
    low, high = sorted(split.low), sorted(split.high)
    if split.degenerate:
        logger.warning("Degenerate empathy split: every profile has chi2 <= median %.4g", split.median)
        return EmpathyReport(len(determinate), split.median, tuple(low), tuple(high), True)

    missing = [pid for pid in ids if pid not in profile_features]
    if missing:
        raise DataError(f"no profile features for: {', '.join(missing)}")

    variables: dict[str, dict[str, float]] = {}
    if facebook_metrics is not None:
        missing = [pid for pid in ids if pid not in facebook_metrics]
        if missing:
            raise MissingMetricsError(f"Facebook metrics missing for: {', '.join(missing)}")
        for name in FacebookMetrics.names():
            variables[name] = {pid: float(getattr(facebook_metrics[pid], name)) for pid in ids}

    variables["word_count"] = {pid: float(profile_features[pid].word_count) for pid in ids}
    for name in sorted(profile_features[ids[0]].category_pct):
        variables[name] = {pid: profile_features[pid].category_pct[name] for pid in ids}
    for name in ("question_marks_pct", "commas_pct", "numerals_pct", "six_letter_pct"):
        variables[name] = {pid: profile_features[pid].feature(name) for pid in ids}
    if sp_scores is not None:
        variables["self_presentation"] = {pid: sp_scores[pid] for pid in ids}

    comparisons = []
    correlations = []
    x = [chi2[pid] for pid in ids]
    for name, values in variables.items():
        comparisons.append(compare_groups(name, [values[pid] for pid in low], [values[pid] for pid in high], "low", "high"))
        try:
            correlations.append(Correlation(name, len(ids), pearson_r(x, [values[pid] for pid in ids])))
        except DegenerateStatisticsError as e:
            logger.warning("Skipping correlation with %s: %s", name, e)
            correlations.append(Correlation(name, len(ids), None, str(e)))

    gender = None
    if genders is not None:
        female = [chi2[pid] for pid in ids if genders.get(pid) == Gender.FEMALE]
        male = [chi2[pid] for pid in ids if genders.get(pid) == Gender.MALE]
        if len(female) >= 2 and len(male) >= 2:
            gender = compare_groups("chi2", female, male, "female", "male")
        else:
            logger.warning("Skipping gender comparison: %d female and %d male determinate profiles", len(female), len(male))

    return EmpathyReport(
        n_determinate=len(determinate),
        median=split.median,
        low=tuple(low),
        high=tuple(high),
        degenerate=False,
        comparisons=tuple(comparisons),
        correlations=tuple(correlations),
        gender=gender,
    )
