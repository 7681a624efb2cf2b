import pytest

from moodco.errors import ConfigError, LexiconFormatError
from moodco.lexicon import Lexicon, categorize, load_lexicon, parse_lexicon

HEADER = "%categories positive_emotion,positive_feeling,negative_emotion,anger\n"


def test_wildcard_entry_with_two_categories():
    lex = parse_lexicon(HEADER + "felic*\tpositive_emotion,positive_feeling\n")
    assert len(lex) == 1
    assert lex.entries["felic*"] == {"positive_emotion", "positive_feeling"}
    assert lex.prefixes == {"felic": frozenset({"positive_emotion", "positive_feeling"})}


def test_empty_file_is_empty_lexicon():
    lex = parse_lexicon("")
    assert len(lex) == 0
    assert lex.categories == ()
    assert categorize(lex, "anything") == frozenset()


def test_comments_and_blank_lines_are_ignored():
    lex = parse_lexicon("# header comment\n\n" + HEADER + "# entries\nodio\tanger\n")
    assert len(lex) == 1


@pytest.mark.parametrize(
    "body, message",
    [
        ("casa\tpositive_emotion\ncasa\tpositive_emotion\n", "duplicate pattern"),
        ("Casa\tpositive_emotion\n", "not lowercase"),
        ("fe*lic\tpositive_emotion\n", "only allowed at the end"),
        ("*\tpositive_emotion\n", "empty pattern"),
        ("casa\tjoy\n", "undeclared"),
        ("casa positive_emotion\n", "pattern<TAB>categories"),
        ("casa\t\n", "no categories"),
        ("%categories anger\n", "declared twice"),
    ],
)
def test_malformed_lines_name_the_line(body, message):
    with pytest.raises(LexiconFormatError, match=message) as exc:
        parse_lexicon(HEADER + body, source="test.dic")
    assert exc.value.line >= 2
    assert "test.dic:" in str(exc.value)


def test_entry_before_header():
    with pytest.raises(LexiconFormatError, match="before %categories"):
        parse_lexicon("odio\tanger\n" + HEADER)


def test_bad_category_names():
    with pytest.raises(LexiconFormatError, match="invalid category"):
        parse_lexicon("%categories Anger\n")
    with pytest.raises(LexiconFormatError, match="duplicate category"):
        parse_lexicon("%categories anger,anger\n")


def test_categorize_prefix_and_exact():
    lex = parse_lexicon(HEADER + "felic*\tpositive_emotion\nodio\tnegative_emotion,anger\n")
    assert categorize(lex, "felicità") == {"positive_emotion"}
    assert categorize(lex, "odio") == {"negative_emotion", "anger"}
    assert categorize(lex, "odiosa") == frozenset()
    assert categorize(lex, "casa") == frozenset()


def test_categorize_unions_every_matching_pattern():
    lex = parse_lexicon(HEADER + "fel*\tpositive_feeling\nfelic*\tpositive_emotion\nfelice\tanger\n")
    assert lex.categorize("felice") == {"positive_feeling", "positive_emotion", "anger"}
    assert lex.categorize("felicità") == {"positive_feeling", "positive_emotion"}


def test_micro_lexicon(micro_lexicon):
    assert len(micro_lexicon.categories) == 18
    assert micro_lexicon.categorize("stronzo") == {"swear", "anger", "negative_emotion"}
    assert micro_lexicon.categorize("felicissima") == {"positive_emotion", "positive_feeling"}
    assert micro_lexicon.categorize("papà") == {"family"}


def test_load_lexicon_from_file(tmp_path):
    path = tmp_path / "mini.dic"
    path.write_text(HEADER + "odio\tanger\n", encoding="utf-8")
    assert load_lexicon(path).categorize("odio") == {"anger"}


def test_load_lexicon_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read lexicon"):
        load_lexicon(tmp_path / "nope.dic")


@pytest.mark.parametrize("pattern", ["pallavolo", "zzz*", "fratelloni"])
def test_unmatched_entry_leaves_categorize_alone(micro_lexicon, pattern):
    extended = Lexicon(micro_lexicon.categories, {**micro_lexicon.entries, pattern: frozenset({"physical"})})
    tokens = ["amore", "felicità", "odio", "fratellone", "oggi", "pall", "zz", "mamma"]
    for token in tokens:
        assert categorize(extended, token) == categorize(micro_lexicon, token)
