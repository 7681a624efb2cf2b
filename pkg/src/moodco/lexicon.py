"""Category dictionaries and word-by-word categorization.

Lexicon files are UTF-8 text::

    # comment
    %categories negative_emotion,anger,positive_emotion
    odio	negative_emotion,anger
    felic*	positive_emotion

A pattern ending in ``*`` matches that prefix followed by any suffix; every other
pattern must match the whole token.
"""

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import ConfigError, LexiconFormatError

logger = logging.getLogger(__name__)

CATEGORY_NAME_RE = re.compile(r"[a-z][a-z0-9_]*")
MICRO_LEXICON_RESOURCE = "micro_lexicon.dic"


@dataclass(frozen=True)
class Lexicon:
    """Immutable pattern table.

    ``exact`` and ``prefixes`` are derived from ``entries``; wildcard entries are
    keyed by their prefix so a token is resolved with one lookup per prefix length.
    """

    categories: tuple[str, ...]
    entries: Mapping[str, frozenset[str]]
    exact: Mapping[str, frozenset[str]] = field(init=False, repr=False, compare=False)
    prefixes: Mapping[str, frozenset[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        exact: dict[str, frozenset[str]] = {}
        prefixes: dict[str, frozenset[str]] = {}
        for pattern, cats in self.entries.items():
            if pattern.endswith("*"):
                prefixes[pattern[:-1]] = frozenset(cats)
            else:
                exact[pattern] = frozenset(cats)
        object.__setattr__(self, "entries", dict(self.entries))
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "prefixes", prefixes)

    def __len__(self) -> int:
        return len(self.entries)

    def categorize(self, token: str) -> frozenset[str]:
        return categorize(self, token)


def categorize(lexicon: Lexicon, token: str) -> frozenset[str]:
    """Union of the categories of every pattern matching ``token``.

    ``token`` must already be lowercased. An unmatched token yields the empty set.
    """
    hits = set(lexicon.exact.get(token, ()))
    if lexicon.prefixes:
        for end in range(1, len(token) + 1):
            cats = lexicon.prefixes.get(token[:end])
            if cats:
                hits.update(cats)
    return frozenset(hits)


def parse_lexicon(text: str, source: Path | str = "<string>") -> Lexicon:
    declared: tuple[str, ...] | None = None
    entries: dict[str, frozenset[str]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue

        if line.startswith("%categories"):
            if declared is not None:
                raise LexiconFormatError(source, lineno, "categories declared twice")
            if entries:
                raise LexiconFormatError(source, lineno, "%categories must precede every entry")
            names = [n.strip() for n in line[len("%categories"):].split(",") if n.strip()]
            if not names:
                raise LexiconFormatError(source, lineno, "empty %categories header")
            for name in names:
                if not CATEGORY_NAME_RE.fullmatch(name):
                    raise LexiconFormatError(source, lineno, f"invalid category name {name!r}")
            if len(set(names)) != len(names):
                raise LexiconFormatError(source, lineno, "duplicate category in %categories header")
            declared = tuple(names)
            continue

        if declared is None:
            raise LexiconFormatError(source, lineno, "entry before %categories header")

        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(source, lineno, "expected 'pattern<TAB>categories'")
        pattern, cat_field = parts[0].strip(), parts[1].strip()

        if pattern != pattern.lower():
            raise LexiconFormatError(source, lineno, f"pattern {pattern!r} is not lowercase")
        if "*" in pattern[:-1]:
            raise LexiconFormatError(source, lineno, f"'*' only allowed at the end of {pattern!r}")
        if not pattern.rstrip("*"):
            raise LexiconFormatError(source, lineno, "empty pattern")
        if pattern in entries:
            raise LexiconFormatError(source, lineno, f"duplicate pattern {pattern!r}")

        cats = [c.strip() for c in cat_field.split(",") if c.strip()]
        if not cats:
            raise LexiconFormatError(source, lineno, f"pattern {pattern!r} has no categories")
        unknown = [c for c in cats if c not in declared]
        if unknown:
            raise LexiconFormatError(source, lineno, f"undeclared categories: {', '.join(unknown)}")
        entries[pattern] = frozenset(cats)

    return Lexicon(categories=declared or (), entries=entries)


def load_lexicon(path: Path | str) -> Lexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"Cannot read lexicon {path}: {e}") from e
    lexicon = parse_lexicon(text, source=path)
    logger.debug("Loaded %d lexicon entries over %d categories from %s", len(lexicon), len(lexicon.categories), path)
    return lexicon


def load_micro_lexicon() -> Lexicon:
    """The small Italian dictionary shipped with the package."""
    resource = resources.files("moodco.data").joinpath(MICRO_LEXICON_RESOURCE)
    return parse_lexicon(resource.read_text(encoding="utf-8"), source=MICRO_LEXICON_RESOURCE)
