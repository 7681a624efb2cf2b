"""Planted synthetic corpora with known moods.

Texts are assembled from words whose categories in the shipped micro-lexicon
are known, so scoring recovers every planted mood. Each profile draws from its
own PCG64 stream spawned from the master seed; results do not depend on the
order in which profiles are generated.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Comment, FacebookMetrics, Gender, Post, PostKind, Profile
from .errors import ConfigError
from .mood import MoodLabel
from .pipeline import CriterionSample
from .stats import make_rng, spawn_rngs

VOCABULARY: dict[str, tuple[str, ...]] = {
    "positive_emotion": ("amore", "bella", "bello", "gioia", "evviva"),
    "positive_feeling": ("amo", "adoro", "tenero"),
    "family": ("mamma", "papà", "nonna", "zio"),
    "negative_emotion": ("paura", "schifo", "dolore"),
    "anger": ("odio", "rabbia"),
    "sadness": ("triste", "piango"),
    "swear": ("cazzo", "merda"),
    "third_person_plural_verb": ("dicono", "fanno", "vanno", "hanno"),
    "physical": ("corro", "stanco"),
    "body": ("mano", "occhi", "testa"),
    "sensorial": ("vedo", "sento", "guardo"),
    "possibility": ("forse", "magari"),
    "sexual": ("sexy", "bacio", "sesso"),
    "money": ("soldi", "euro", "pago"),
    "present_tense": ("faccio", "vado"),
    "first_person_singular_pronoun": ("io", "me", "mi"),
    "second_person_singular_verb": ("sei", "hai", "vuoi"),
    "conditional": ("vorrei", "potrei", "sarei"),
}

# not in the micro-lexicon, at most six letters
FILLERS = (
    "oggi", "poi", "qui", "che", "con", "per", "il", "la", "un", "una", "del", "sul",
    "dopo", "anche", "tutto", "sempre", "ancora", "casa", "mare", "sera", "notte",
    "festa", "gol", "treno", "scuola", "esame",
)  # fmt: skip

POSITIVE_PLANTED = ("positive_feeling", "positive_emotion", "family")
NEGATIVE_PLANTED = ("negative_emotion", "swear", "anger", "sadness", "third_person_plural_verb")
NOISE_CATEGORIES = (
    "physical",
    "body",
    "sensorial",
    "possibility",
    "sexual",
    "money",
    "present_tense",
    "first_person_singular_pronoun",
    "second_person_singular_verb",
    "conditional",
)

POSITIVE_WORDS = tuple(w for c in POSITIVE_PLANTED for w in VOCABULARY[c])
NEGATIVE_WORDS = tuple(w for c in NEGATIVE_PLANTED for w in VOCABULARY[c])
MEDIA_KINDS = (PostKind.PHOTO, PostKind.VIDEO, PostKind.MUSIC, PostKind.FAMOUS_QUOTE)


def _pick(rng: np.random.Generator, words: Sequence[str]) -> str:
    return words[int(rng.integers(len(words)))]


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} must be a probability in [0, 1], got {value}")


def profile_streams(seed: int, n: int) -> list[np.random.Generator]:
    return spawn_rngs(seed, n)


@dataclass(frozen=True)
class ContagionConfig:
    """Generator parameters.

    A comment copies its post's mood with probability ``coupling`` and otherwise
    draws positive with ``p_positive_comment``. When ``high_coupling`` is set, a
    ``high_coupling_share`` of profiles use it instead of ``coupling``, post
    ``high_post_factor`` times as much and add sexual words at
    ``high_sexual_rate``.
    """

    n_profiles: int = 50
    posts_per_profile: int = 600
    comments_per_post_mean: float = 2.0
    p_positive_post: float = 0.57
    coupling: float = 0.5
    seed: int = 0
    p_neutral_post: float = 0.0
    p_neutral_comment: float = 0.0
    p_positive_comment: float = 0.5
    p_media_post: float = 0.0
    posts_jitter: float = 0.0
    high_coupling: float | None = None
    high_coupling_share: float = 0.5
    high_post_factor: float = 1.0
    high_sexual_rate: float = 0.0
    base_sexual_rate: float = 0.05
    likes_mean: float = 15.0
    emotional_likes_factor: float = 1.0
    emotional_comments_factor: float = 1.0
    min_words: int = 3
    max_words: int = 12

    def validate(self) -> "ContagionConfig":
        for name in (
            "p_positive_post",
            "coupling",
            "p_neutral_post",
            "p_neutral_comment",
            "p_positive_comment",
            "p_media_post",
            "posts_jitter",
            "high_coupling_share",
            "high_sexual_rate",
            "base_sexual_rate",
        ):
            _check_probability(name, getattr(self, name))
        if self.high_coupling is not None:
            _check_probability("high_coupling", self.high_coupling)
        if self.n_profiles < 0 or self.posts_per_profile < 0:
            raise ConfigError("n_profiles and posts_per_profile must be non-negative")
        if self.comments_per_post_mean < 0 or self.likes_mean < 0:
            raise ConfigError("comments_per_post_mean and likes_mean must be non-negative")
        if self.emotional_likes_factor < 0 or self.emotional_comments_factor < 0 or self.high_post_factor < 0:
            raise ConfigError("factors must be non-negative")
        if not 1 <= self.min_words <= self.max_words:
            raise ConfigError("need 1 <= min_words <= max_words")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        return self


def _draw_mood(rng: np.random.Generator, p_neutral: float, p_positive: float) -> MoodLabel:
    if rng.random() < p_neutral:
        return MoodLabel.NEUTRAL
    return MoodLabel.POSITIVE if rng.random() < p_positive else MoodLabel.NEGATIVE


def _mood_text(rng: np.random.Generator, mood: MoodLabel, cfg: ContagionConfig, sexual_rate: float) -> str:
    n = int(rng.integers(cfg.min_words, cfg.max_words + 1))
    words = []
    if mood != MoodLabel.NEUTRAL:
        vocab = POSITIVE_WORDS if mood == MoodLabel.POSITIVE else NEGATIVE_WORDS
        words.extend(_pick(rng, vocab) for _ in range(int(rng.integers(1, 3))))
    if sexual_rate and rng.random() < sexual_rate:
        words.append(_pick(rng, VOCABULARY["sexual"]))
    while len(words) < n:
        words.append(_pick(rng, FILLERS))
    order = rng.permutation(len(words))
    return " ".join(words[i] for i in order)


def _profile_metrics(rng: np.random.Generator, posts: Sequence[Post]) -> FacebookMetrics:
    wall_posts = len(posts)
    length = sum(len(p.text) for p in posts)
    photos = sum(1 for p in posts if p.kind is PostKind.PHOTO)
    videos = sum(1 for p in posts if p.kind is PostKind.VIDEO)
    likes = sum(p.likes for p in posts)
    return FacebookMetrics(
        friends=int(rng.poisson(350)),
        followed_people=int(rng.poisson(20)),
        visited_places=int(rng.poisson(5)),
        famous_quotes=sum(1 for p in posts if p.kind is PostKind.FAMOUS_QUOTE),
        pages_with_likes=int(rng.poisson(60)),
        complete_activity=wall_posts + int(rng.poisson(40)),
        wall_posts=wall_posts,
        profile_picture_edits=int(rng.poisson(6)),
        personal_photos=photos,
        photos=photos + int(rng.poisson(10)),
        videos=videos,
        likes=likes,
        activities_with_like=sum(1 for p in posts if p.likes),
        wall_posts_with_comments=sum(1 for p in posts if p.comments),
        comments=sum(len(p.comments) for p in posts),
        wall_posts_length=length,
        wall_posts_average_length=round(length / wall_posts) if wall_posts else 0,
    )


def generate_profile(index: int, rng: np.random.Generator, cfg: ContagionConfig) -> Profile:
    width = max(2, len(str(cfg.n_profiles)))
    profile_id = f"p{index + 1:0{width}d}"
    gender = Gender.FEMALE if rng.random() < 0.5 else Gender.MALE

    high = cfg.high_coupling is not None and rng.random() < cfg.high_coupling_share
    coupling = cfg.high_coupling if high else cfg.coupling
    sexual_rate = cfg.high_sexual_rate if high else cfg.base_sexual_rate
    n_posts = cfg.posts_per_profile * (cfg.high_post_factor if high else 1.0)
    if cfg.posts_jitter:
        n_posts *= 1.0 + cfg.posts_jitter * rng.uniform(-1.0, 1.0)
    n_posts = int(round(n_posts))

    posts = []
    for j in range(n_posts):
        post_id = f"{profile_id}-{j + 1:04d}"
        if cfg.p_media_post and rng.random() < cfg.p_media_post:
            kind = MEDIA_KINDS[int(rng.integers(len(MEDIA_KINDS)))]
            posts.append(Post(post_id, kind, "", int(rng.poisson(cfg.likes_mean))))
            continue

        mood = _draw_mood(rng, cfg.p_neutral_post, cfg.p_positive_post)
        emotional = mood != MoodLabel.NEUTRAL
        text = _mood_text(rng, mood, cfg, sexual_rate)
        likes = int(rng.poisson(cfg.likes_mean * (cfg.emotional_likes_factor if emotional else 1.0)))
        n_comments = int(rng.poisson(cfg.comments_per_post_mean * (cfg.emotional_comments_factor if emotional else 1.0)))

        comments = []
        for k in range(n_comments):
            if rng.random() < cfg.p_neutral_comment:
                c_mood = MoodLabel.NEUTRAL
            elif emotional and rng.random() < coupling:
                c_mood = mood
            else:
                c_mood = MoodLabel.POSITIVE if rng.random() < cfg.p_positive_comment else MoodLabel.NEGATIVE
            comments.append(Comment(f"c{k + 1}", _mood_text(rng, c_mood, cfg, 0.0)))
        posts.append(Post(post_id, PostKind.TEXT, text, likes, tuple(comments)))

    return Profile(profile_id, gender, _profile_metrics(rng, posts), tuple(posts))


def generate_contagion_corpus(config: ContagionConfig) -> list[Profile]:
    config.validate()
    streams = profile_streams(config.seed, config.n_profiles)
    return [generate_profile(i, rng, config) for i, rng in enumerate(streams)]


@dataclass(frozen=True)
class CriterionConfig:
    """Planted criterion sample: markers of a mood appear with ``p_marker`` in
    posts of that mood and ``p_background`` elsewhere; numerals are the reverse
    for negative posts; noise categories use ``p_noise`` for every label."""

    n_per_label: int = 48
    seed: int = 0
    words_per_text: int = 12
    p_marker: float = 0.8
    p_background: float = 0.05
    p_noise: float = 0.3
    p_comma: float = 0.3

    def validate(self) -> "CriterionConfig":
        for name in ("p_marker", "p_background", "p_noise", "p_comma"):
            _check_probability(name, getattr(self, name))
        if self.n_per_label < 2:
            raise ConfigError("n_per_label must be at least 2")
        if self.words_per_text < 1:
            raise ConfigError("words_per_text must be positive")
        return self


def _criterion_text(rng: np.random.Generator, label: MoodLabel, cfg: CriterionConfig) -> str:
    words: list[str] = []
    for category in POSITIVE_PLANTED:
        if rng.random() < (cfg.p_marker if label == MoodLabel.POSITIVE else cfg.p_background):
            words.append(_pick(rng, VOCABULARY[category]))
    for category in NEGATIVE_PLANTED:
        if rng.random() < (cfg.p_marker if label == MoodLabel.NEGATIVE else cfg.p_background):
            words.append(_pick(rng, VOCABULARY[category]))
    if rng.random() < (cfg.p_background if label == MoodLabel.NEGATIVE else cfg.p_marker):
        words.append(str(int(rng.integers(1, 100))))
    for category in NOISE_CATEGORIES:
        if rng.random() < cfg.p_noise:
            words.append(_pick(rng, VOCABULARY[category]))
    while len(words) < cfg.words_per_text:
        words.append(_pick(rng, FILLERS))

    order = rng.permutation(len(words))
    parts = []
    for i in order:
        parts.append(words[i])
        if rng.random() < cfg.p_comma:
            parts[-1] += ","
    text = " ".join(parts).rstrip(",")
    question = rng.random() < (cfg.p_marker if label == MoodLabel.POSITIVE else cfg.p_background)
    return text + ("?" if question else ".")


def generate_criterion_sample(config: CriterionConfig) -> CriterionSample:
    config.validate()
    rng = make_rng(config.seed)
    posts = [
        (_criterion_text(rng, label, config), label)
        for label in (MoodLabel.POSITIVE, MoodLabel.NEGATIVE, MoodLabel.NEUTRAL)
        for _ in range(config.n_per_label)
    ]
    return CriterionSample(tuple(posts))
