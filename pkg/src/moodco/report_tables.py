"""Flat rows for the CSV reports and the TOML mood model."""

from typing import Any, Sequence

import toml

from .corpus import Profile, eligible_posts
from .lexicon import Lexicon
from .mood import MoodModel
from .pipeline import CoherenceResult, CorpusScores, GroupComparison, SelectedPredictors
from .textfeatures import STRUCTURAL_FEATURES, analyze_post

SCORE_FIELDS = ("profile_id", "post_id", "comment_id", "unit", "word_count", "positive", "negative", "label")

COHERENCE_FIELDS = (
    "profile_id",
    "chi2",
    "p_value",
    "df",
    "highly_empathetic",
    "indeterminate",
    "reason",
    "positive_positive",
    "positive_negative",
    "negative_positive",
    "negative_negative",
)

COMPARISON_FIELDS = (
    "variable",
    "group_a",
    "group_b",
    "n_a",
    "n_b",
    "mean_a",
    "sd_a",
    "mean_b",
    "sd_b",
    "t",
    "df",
    "p_value",
    "error",
)

PREDICTOR_FIELDS = ("category", "f", "p_value", "df_between", "df_within", "sum_of_squares", "target_mood", "sign", "discriminating")


def score_rows(scores: CorpusScores) -> list[dict[str, Any]]:
    """One row per scored post followed by one row per comment of that post."""
    rows = []
    for post in scores.posts():
        rows.append(
            {
                "profile_id": post.profile_id,
                "post_id": post.post_id,
                "comment_id": "",
                "unit": "post",
                "word_count": post.word_count,
                "positive": post.scores.positive,
                "negative": post.scores.negative,
                "label": post.label,
            }
        )
        for comment in post.comments:
            rows.append(
                {
                    "profile_id": post.profile_id,
                    "post_id": post.post_id,
                    "comment_id": comment.comment_id,
                    "unit": "comment",
                    "word_count": comment.word_count,
                    "positive": comment.scores.positive,
                    "negative": comment.scores.negative,
                    "label": comment.label,
                }
            )
    return rows


def _cell(result: CoherenceResult, row: str, col: str) -> int:
    table = result.table
    if row not in table.rows or col not in table.cols:
        return 0
    return table.cell(row, col)


def coherence_rows(results: Sequence[CoherenceResult]) -> list[dict[str, Any]]:
    return [
        {
            "profile_id": r.profile_id,
            "chi2": r.chi2,
            "p_value": r.p_value,
            "df": r.df,
            "highly_empathetic": r.highly_empathetic,
            "indeterminate": r.indeterminate,
            "reason": r.reason,
            "positive_positive": _cell(r, "positive", "positive"),
            "positive_negative": _cell(r, "positive", "negative"),
            "negative_positive": _cell(r, "negative", "positive"),
            "negative_negative": _cell(r, "negative", "negative"),
        }
        for r in results
    ]


def comparison_rows(comparisons: Sequence[GroupComparison]) -> list[dict[str, Any]]:
    rows = []
    for c in comparisons:
        result = c.result
        rows.append(
            {
                "variable": c.variable,
                "group_a": c.group_a,
                "group_b": c.group_b,
                "n_a": c.n_a,
                "n_b": c.n_b,
                "mean_a": c.mean_a,
                "sd_a": c.sd_a,
                "mean_b": c.mean_b,
                "sd_b": c.sd_b,
                "t": result.statistic if result else None,
                "df": result.df if result else None,
                "p_value": result.p_value if result else None,
                "error": c.error,
            }
        )
    return rows


def predictor_rows(selected: SelectedPredictors) -> list[dict[str, Any]]:
    return [
        {
            "category": p.category,
            "f": p.f,
            "p_value": p.p_value,
            "df_between": p.df[0],
            "df_within": p.df[1],
            "sum_of_squares": p.sum_of_squares,
            "target_mood": p.target_mood,
            "sign": p.sign,
            "discriminating": p.discriminating,
        }
        for p in selected.predictors
    ]


def feature_rows(profiles: Sequence[Profile], lexicon: Lexicon, require_comments: bool = True) -> tuple[list[str], list[dict[str, Any]]]:
    """Field names and one feature row per eligible post."""
    fields = ["profile_id", "post_id", *STRUCTURAL_FEATURES, *sorted(lexicon.categories)]
    rows = []
    for profile in profiles:
        for post in eligible_posts(profile, require_comments):
            row: dict[str, Any] = {"profile_id": profile.profile_id, "post_id": post.post_id}
            row.update(analyze_post(post, lexicon).as_row())
            rows.append(row)
    return fields, rows


def mood_model_toml(model: MoodModel) -> str:
    """A bindings file whose ``[model]`` table is read back by ``load_bindings``."""
    return toml.dumps(
        {
            "model": {
                "positive_terms": [[name, sign] for name, sign in model.positive_terms],
                "negative_terms": [[name, sign] for name, sign in model.negative_terms],
            }
        }
    )
