from pathlib import Path

import pytest

from moodco.corpus import Comment, Gender, Post, PostKind, Profile, save_corpus
from moodco.lexicon import Lexicon, load_micro_lexicon


@pytest.fixture(scope="session")
def micro_lexicon() -> Lexicon:
    return load_micro_lexicon()


def text_post(post_id: str, text: str, *comments: str, likes: int = 0) -> Post:
    return Post(
        post_id,
        PostKind.TEXT,
        text,
        likes,
        tuple(Comment(f"c{i}", c) for i, c in enumerate(comments, start=1)),
    )


@pytest.fixture
def coherent_profile() -> Profile:
    """Every comment echoes its post: 20 positive and 20 negative pairs."""
    posts = []
    for i in range(20):
        posts.append(text_post(f"pos{i}", "che bella giornata amore", "amore mio"))
        posts.append(text_post(f"neg{i}", "ti odio", "che schifo"))
    return Profile("p01", Gender.FEMALE, None, tuple(posts))


@pytest.fixture
def write_corpus(tmp_path: Path):
    def write(profiles, name: str = "corpus.jsonl") -> Path:
        return save_corpus(profiles, tmp_path / name)

    return write


@pytest.fixture(autouse=True)
def no_user_config(monkeypatch, tmp_path):
    """Keep the developer's own moodco config out of every test."""
    monkeypatch.delenv("MOODCO_CONFIG", raising=False)
    monkeypatch.setattr("moodco.config.user_config_dir", lambda app: str(tmp_path / "user-config"))
