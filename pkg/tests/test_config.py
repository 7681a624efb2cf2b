from pathlib import Path

import pytest

from moodco.config import (
    CONFIG_ENV_VAR,
    CoherenceUnit,
    RunConfig,
    load_bindings,
    load_configured_lexicon,
    load_run_config,
    resolve_config_path,
)
from moodco.errors import BindingError, ConfigError
from moodco.mood import DEFAULT_MODEL, MoodModel, TiePolicy
from moodco.report_tables import mood_model_toml


def test_defaults():
    cfg = load_run_config()
    assert cfg == RunConfig()
    assert cfg.alpha == 0.01
    assert cfg.empathy_threshold == 4.0
    assert cfg.tie_policy is TiePolicy.NEUTRAL
    assert cfg.coherence_unit is CoherenceUnit.COMMENT


def test_file_then_flags(tmp_path):
    path = tmp_path / "moodco.toml"
    path.write_text('seed = 7\nalpha = 0.05\ntie_policy = "positive"\ncorpus_path = "data/c.jsonl"\n', encoding="utf-8")
    cfg = load_run_config(path, {"seed": 9, "alpha": None})
    assert cfg.seed == 9
    assert cfg.alpha == 0.05
    assert cfg.tie_policy is TiePolicy.POSITIVE
    assert cfg.corpus_path == tmp_path / "data" / "c.jsonl"


def test_env_var_fallback(tmp_path, monkeypatch):
    path = tmp_path / "env.toml"
    path.write_text("jobs = 3\n", encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert resolve_config_path() == path
    assert load_run_config().jobs == 3
    assert resolve_config_path(Path("explicit.toml")) == Path("explicit.toml")


def test_platform_config_dir(tmp_path):
    user_dir = tmp_path / "user-config"
    user_dir.mkdir()
    (user_dir / "config.toml").write_text('coherence_unit = "post_mean"\n', encoding="utf-8")
    assert load_run_config().coherence_unit is CoherenceUnit.POST_MEAN


@pytest.mark.parametrize(
    "text, message",
    [
        ("colour = 1\n", "unknown keys"),
        ('seed = "seven"\n', "invalid value for seed"),
        ('tie_policy = "random"\n', "invalid value for tie_policy"),
        ("alpha = = 1\n", "invalid config file"),
    ],
)
def test_bad_config_files(tmp_path, text, message):
    path = tmp_path / "bad.toml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError, match=message):
        load_run_config(path)


@pytest.mark.parametrize(
    "overrides, message",
    [
        ({"alpha": 0.0}, "alpha"),
        ({"alpha": 1.5}, "alpha"),
        ({"scheffe_alpha": 1.0}, "scheffe_alpha"),
        ({"empathy_threshold": 0.0}, "empathy_threshold"),
        ({"jobs": 0}, "jobs"),
        ({"seed": -1}, "seed"),
    ],
)
def test_validate_ranges(overrides, message):
    with pytest.raises(ConfigError, match=message):
        load_run_config(None, overrides).validate()


def test_alpha_one_is_allowed():
    assert load_run_config(None, {"alpha": 1.0}).validate().alpha == 1.0


def test_validate_paths(tmp_path):
    with pytest.raises(ConfigError, match="no corpus"):
        RunConfig().validate(need_corpus=True)
    with pytest.raises(ConfigError, match="lexicon file not readable"):
        RunConfig(lexicon_path=tmp_path / "missing.dic").validate()


def test_bindings_file(tmp_path):
    path = tmp_path / "bindings.toml"
    path.write_text('[bindings]\nFa = "sadness"\n\n[self_presentation]\nsexual_z = 0.5\n', encoding="utf-8")
    model, sp = load_bindings(path)
    assert ("sadness", 1) in model.positive_terms
    assert ("family", 1) not in model.positive_terms
    assert sp.sexual_z == 0.5
    assert load_bindings(None)[0] == DEFAULT_MODEL


@pytest.mark.parametrize(
    "text, error",
    [
        ('[bindings]\nXX = "family"\n', BindingError),
        ("[bindings]\nFa = 3\n", BindingError),
        ('[weights]\nFa = "family"\n', ConfigError),
        ("[self_presentation]\nslope = 2.0\n", ConfigError),
        ('[bindings]\nFa = "family"\n[model]\npositive_terms = [["family", 1]]\nnegative_terms = [["anger", 1]]\n', BindingError),
        ('[model]\npositive_terms = [["family", 2]]\nnegative_terms = [["anger", 1]]\n', BindingError),
    ],
)
def test_bad_bindings(tmp_path, text, error):
    path = tmp_path / "bindings.toml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(error):
        load_bindings(path)


def test_mood_model_file_loads_back(tmp_path):
    model = MoodModel((("positive_feeling", 1), ("question_marks_pct", 1)), (("anger", 1), ("numerals_pct", -1)))
    path = tmp_path / "mood_model.toml"
    path.write_text(mood_model_toml(model), encoding="utf-8")
    assert load_bindings(path)[0] == model


def test_configured_lexicon(tmp_path, micro_lexicon):
    assert load_configured_lexicon(RunConfig()) == micro_lexicon
    path = tmp_path / "mini.dic"
    path.write_text("%categories anger\nodio\tanger\n", encoding="utf-8")
    assert load_configured_lexicon(RunConfig(lexicon_path=path)).categories == ("anger",)
