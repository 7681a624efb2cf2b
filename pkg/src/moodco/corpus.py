"""Corpus data model and its JSON-Lines file format.

One record per line::

    {"type":"header","profiles":1,"posts":2,"comments":3}        (optional)
    {"type":"profile","profile_id":"p01","gender":"female","metrics":{...}}
    {"type":"post","profile_id":"p01","post_id":"p01-0007","kind":"text",
     "text":"...","likes":12,"comments":[{"comment_id":"c1","text":"..."}]}

A profile record must precede the posts that reference it.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime
from enum import StrEnum
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import CorpusFormatError
from .reports import atomic_write_text

logger = logging.getLogger(__name__)


class Gender(StrEnum):
    FEMALE = "female"
    MALE = "male"
    UNSPECIFIED = "unspecified"


class PostKind(StrEnum):
    TEXT = "text"
    PHOTO = "photo"
    VIDEO = "video"
    MUSIC = "music"
    FAMOUS_QUOTE = "famous_quote"
    OTHER = "other"


@dataclass(frozen=True)
class FacebookMetrics:
    """Observation-grid counts coded from one year of a profile's activity."""

    friends: int
    followed_people: int
    visited_places: int
    famous_quotes: int
    pages_with_likes: int
    complete_activity: int
    wall_posts: int
    profile_picture_edits: int
    personal_photos: int
    photos: int
    videos: int
    likes: int
    activities_with_like: int
    wall_posts_with_comments: int
    comments: int
    wall_posts_length: int
    wall_posts_average_length: int

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"metric {f.name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"metric {f.name} must be non-negative, got {value}")
        if self.wall_posts_with_comments > self.wall_posts:
            raise ValueError("wall_posts_with_comments exceeds wall_posts")
        if self.wall_posts > 0:
            exact = self.wall_posts_length / self.wall_posts
            if abs(self.wall_posts_average_length - exact) > 0.5:
                raise ValueError(
                    f"wall_posts_average_length {self.wall_posts_average_length} "
                    f"does not match wall_posts_length / wall_posts = {exact:.2f}"
                )

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class Comment:
    comment_id: str
    text: str


@dataclass(frozen=True)
class Post:
    post_id: str
    kind: PostKind
    text: str = ""
    likes: int = 0
    comments: tuple[Comment, ...] = ()
    timestamp: str | None = None


@dataclass(frozen=True)
class Profile:
    profile_id: str
    gender: Gender = Gender.UNSPECIFIED
    metrics: FacebookMetrics | None = None
    posts: tuple[Post, ...] = ()


@dataclass(frozen=True)
class CorpusCounts:
    profiles: int
    posts: int
    comments: int


def eligible_posts(profile: Profile, require_comments: bool = True) -> list[Post]:
    """Text posts of ``profile`` in stored order, optionally dropping commentless ones."""
    return [
        post
        for post in profile.posts
        if post.kind is PostKind.TEXT and (post.comments or not require_comments)
    ]


def corpus_counts(profiles: Sequence[Profile]) -> CorpusCounts:
    return CorpusCounts(
        profiles=len(profiles),
        posts=sum(len(p.posts) for p in profiles),
        comments=sum(len(post.comments) for p in profiles for post in p.posts),
    )


@dataclass
class _ProfileBuilder:
    profile_id: str
    gender: Gender
    metrics: FacebookMetrics | None
    posts: list[Post] = field(default_factory=list)
    post_ids: set[str] = field(default_factory=set)

    def build(self) -> Profile:
        return Profile(self.profile_id, self.gender, self.metrics, tuple(self.posts))


_PROFILE_KEYS = {"type", "profile_id", "gender", "metrics"}
_POST_KEYS = {"type", "profile_id", "post_id", "kind", "text", "likes", "comments", "timestamp"}
_COMMENT_KEYS = {"comment_id", "text"}
_HEADER_KEYS = {"type", "profiles", "posts", "comments"}


def _require_str(record: dict, key: str, *, allow_empty: bool = False) -> str:
    value = record.get(key)
    if not isinstance(value, str):
        raise ValueError(f"{key!r} must be a string")
    if not allow_empty and not value:
        raise ValueError(f"{key!r} must be non-empty")
    return value


def _require_count(record: dict, key: str, default: int | None = None) -> int:
    value = record.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{key!r} must be a non-negative integer")
    return value


def _check_keys(record: dict, allowed: set[str], what: str) -> None:
    extra = set(record) - allowed
    if extra:
        raise ValueError(f"unknown {what} keys: {', '.join(sorted(extra))}")


def _parse_metrics(raw: Any) -> FacebookMetrics:
    if not isinstance(raw, dict):
        raise ValueError("'metrics' must be an object")
    expected = set(FacebookMetrics.names())
    missing, extra = expected - set(raw), set(raw) - expected
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {', '.join(sorted(missing))}")
        if extra:
            parts.append(f"unknown {', '.join(sorted(extra))}")
        raise ValueError("metrics keys: " + "; ".join(parts))
    return FacebookMetrics(**raw)


def _parse_comments(raw: Any) -> tuple[Comment, ...]:
    if not isinstance(raw, list):
        raise ValueError("'comments' must be a list")
    seen: set[str] = set()
    comments = []
    for item in raw:
        if not isinstance(item, dict):
            raise ValueError("each comment must be an object")
        _check_keys(item, _COMMENT_KEYS, "comment")
        comment_id = _require_str(item, "comment_id")
        if comment_id in seen:
            raise ValueError(f"duplicate comment_id {comment_id!r}")
        seen.add(comment_id)
        comments.append(Comment(comment_id, _require_str(item, "text", allow_empty=True)))
    return tuple(comments)


def _parse_timestamp(value: Any) -> str | None:
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValueError("'timestamp' must be an ISO-8601 string")
    datetime.fromisoformat(value)
    return value


def parse_corpus_lines(lines: Iterable[str], source: Path | str = "<string>") -> list[Profile]:
    builders: dict[str, _ProfileBuilder] = {}
    header: CorpusCounts | None = None
    header_line: int | None = None

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(source, lineno, f"malformed JSON: {e.msg}") from e
        if not isinstance(record, dict):
            raise CorpusFormatError(source, lineno, "record must be a JSON object")

        try:
            rtype = record.get("type")
            if rtype == "header":
                if header is not None:
                    raise ValueError("duplicate header record")
                _check_keys(record, _HEADER_KEYS, "header")
                header = CorpusCounts(
                    profiles=_require_count(record, "profiles"),
                    posts=_require_count(record, "posts"),
                    comments=_require_count(record, "comments"),
                )
                header_line = lineno
            elif rtype == "profile":
                _check_keys(record, _PROFILE_KEYS, "profile")
                profile_id = _require_str(record, "profile_id")
                if profile_id in builders:
                    raise ValueError(f"duplicate profile_id {profile_id!r}")
                gender = Gender(record.get("gender", Gender.UNSPECIFIED))
                metrics = _parse_metrics(record["metrics"]) if record.get("metrics") is not None else None
                builders[profile_id] = _ProfileBuilder(profile_id, gender, metrics)
            elif rtype == "post":
                _check_keys(record, _POST_KEYS, "post")
                profile_id = _require_str(record, "profile_id")
                builder = builders.get(profile_id)
                if builder is None:
                    raise ValueError(f"post references unknown profile_id {profile_id!r}")
                post_id = _require_str(record, "post_id")
                if post_id in builder.post_ids:
                    raise ValueError(f"duplicate post_id {post_id!r} in profile {profile_id!r}")
                kind_value = record.get("kind")
                try:
                    kind = PostKind(kind_value)
                except ValueError:
                    raise ValueError(f"unknown post kind {kind_value!r}") from None
                post = Post(
                    post_id=post_id,
                    kind=kind,
                    text=_require_str(record, "text", allow_empty=True) if "text" in record else "",
                    likes=_require_count(record, "likes", default=0),
                    comments=_parse_comments(record.get("comments", [])),
                    timestamp=_parse_timestamp(record.get("timestamp")),
                )
                if builder.posts and post.timestamp and builder.posts[-1].timestamp:
                    if datetime.fromisoformat(post.timestamp) < datetime.fromisoformat(builder.posts[-1].timestamp):
                        raise ValueError(f"post {post_id!r} is older than the post before it")
                builder.post_ids.add(post_id)
                builder.posts.append(post)
            else:
                raise ValueError(f"unknown record type {rtype!r}")
        except (ValueError, TypeError, KeyError) as e:
            raise CorpusFormatError(source, lineno, str(e)) from e

    profiles = [b.build() for b in builders.values()]
    if header is not None:
        actual = corpus_counts(profiles)
        if actual != header:
            raise CorpusFormatError(
                source,
                header_line,
                f"header declares {header.profiles} profiles/{header.posts} posts/{header.comments} comments, "
                f"corpus has {actual.profiles}/{actual.posts}/{actual.comments}",
            )
    return profiles


def load_corpus(path: Path | str) -> list[Profile]:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            profiles = parse_corpus_lines(f, source=path)
    except OSError as e:
        raise CorpusFormatError(path, None, f"cannot read corpus: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusFormatError(path, None, f"corpus is not valid UTF-8: {e}") from e
    logger.debug("Loaded %d profiles from %s", len(profiles), path)
    return profiles


def profile_record(profile: Profile) -> dict[str, Any]:
    record: dict[str, Any] = {
        "type": "profile",
        "profile_id": profile.profile_id,
        "gender": str(profile.gender),
    }
    if profile.metrics is not None:
        record["metrics"] = asdict(profile.metrics)
    return record


def post_record(profile_id: str, post: Post) -> dict[str, Any]:
    record: dict[str, Any] = {
        "type": "post",
        "profile_id": profile_id,
        "post_id": post.post_id,
        "kind": str(post.kind),
        "text": post.text,
        "likes": post.likes,
        "comments": [{"comment_id": c.comment_id, "text": c.text} for c in post.comments],
    }
    if post.timestamp is not None:
        record["timestamp"] = post.timestamp
    return record


def iter_corpus_lines(profiles: Sequence[Profile], *, header: bool = True) -> Iterable[str]:
    def dumps(record: dict) -> str:
        return json.dumps(record, ensure_ascii=False, separators=(",", ":"))

    if header:
        counts = corpus_counts(profiles)
        yield dumps({"type": "header", **asdict(counts)})
    for profile in profiles:
        yield dumps(profile_record(profile))
        for post in profile.posts:
            yield dumps(post_record(profile.profile_id, post))


def serialize_corpus(profiles: Sequence[Profile], *, header: bool = True) -> str:
    return "".join(line + "\n" for line in iter_corpus_lines(profiles, header=header))


def save_corpus(profiles: Sequence[Profile], path: Path | str, *, header: bool = True) -> Path:
    return atomic_write_text(path, serialize_corpus(profiles, header=header))
