"""Run configuration and mood bindings.

Config files are TOML ``key = value`` text. Precedence, lowest first: built-in
defaults, config file, command-line flags. The config file is ``--config``, else
``$MOODCO_CONFIG``, else ``config.toml`` in the platform user config directory
when it exists.
"""

import logging
import os
import tomllib
from dataclasses import dataclass, fields, replace
from enum import StrEnum
from pathlib import Path
from typing import Any, Mapping

from platformdirs import user_config_dir

from .errors import BindingError, ConfigError
from .lexicon import Lexicon, load_lexicon, load_micro_lexicon
from .mood import DEFAULT_BINDINGS, SYMBOLS, MoodModel, SelfPresentationModel, TiePolicy

logger = logging.getLogger(__name__)

APP_NAME = "moodco"
CONFIG_ENV_VAR = "MOODCO_CONFIG"


class CoherenceUnit(StrEnum):
    COMMENT = "comment"
    POST_MEAN = "post_mean"


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    lexicon_path: Path | None = None
    bindings_path: Path | None = None
    corpus_path: Path | None = None
    seed: int = 0
    alpha: float = 0.01
    scheffe_alpha: float = 0.05
    empathy_threshold: float = 4.0
    tie_policy: TiePolicy = TiePolicy.NEUTRAL
    coherence_unit: CoherenceUnit = CoherenceUnit.COMMENT
    output_dir: Path = Path("moodco-out")
    require_comments: bool = True
    jobs: int = 1
    format: OutputFormat = OutputFormat.JSON

    def validate(self, *, need_corpus: bool = False) -> "RunConfig":
        """Check ranges and that every configured input is readable."""
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 < self.scheffe_alpha < 1:
            raise ConfigError(f"scheffe_alpha must be in (0, 1), got {self.scheffe_alpha}")
        if self.empathy_threshold <= 0:
            raise ConfigError(f"empathy_threshold must be positive, got {self.empathy_threshold}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if need_corpus and self.corpus_path is None:
            raise ConfigError("no corpus given (use --corpus or corpus_path in the config file)")
        for label, path in (
            ("lexicon", self.lexicon_path),
            ("bindings", self.bindings_path),
            ("corpus", self.corpus_path if need_corpus else None),
        ):
            if path is not None and not (path.is_file() and os.access(path, os.R_OK)):
                raise ConfigError(f"{label} file not readable: {path}")
        return self


_PATH_KEYS = {"lexicon_path", "bindings_path", "corpus_path", "output_dir"}


def _coerce(name: str, value: Any, base: Path) -> Any:
    try:
        if name in _PATH_KEYS:
            path = Path(value).expanduser()
            return path if path.is_absolute() else base / path
        if name in ("seed", "jobs"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError
            return value
        if name in ("alpha", "scheffe_alpha", "empathy_threshold"):
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if name == "require_comments":
            if not isinstance(value, bool):
                raise TypeError
            return value
        if name == "tie_policy":
            return TiePolicy(value)
        if name == "coherence_unit":
            return CoherenceUnit(value)
        if name == "format":
            return OutputFormat(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {name}: {value!r}") from None
    return value


def resolve_config_path(cli_path: Path | None = None) -> Path | None:
    if cli_path is not None:
        return cli_path
    env = os.environ.get(CONFIG_ENV_VAR)
    if env:
        return Path(env)
    default = Path(user_config_dir(APP_NAME)) / "config.toml"
    return default if default.is_file() else None


def read_toml(path: Path, what: str) -> dict[str, Any]:
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {what} {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid {what} {path}: {e}") from e


def load_run_config(config_path: Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Defaults, then the resolved config file, then non-None ``overrides``."""
    config = RunConfig()
    path = resolve_config_path(config_path)
    known = {f.name for f in fields(RunConfig)}

    if path is not None:
        data = read_toml(path, "config file")
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown keys in {path}: {', '.join(sorted(unknown))}")
        base = path.parent
        config = replace(config, **{k: _coerce(k, v, base) for k, v in data.items()})
        logger.debug("Loaded config from %s", path)

    if overrides:
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"unknown config overrides: {', '.join(sorted(unknown))}")
        cwd = Path.cwd()
        config = replace(config, **{k: _coerce(k, v, cwd) for k, v in overrides.items() if v is not None})
    return config


def _model_from_table(table: Any, path: Path) -> MoodModel:
    def terms(key: str) -> tuple[tuple[str, int], ...]:
        raw = table.get(key) if isinstance(table, dict) else None
        if not isinstance(raw, list) or not raw:
            raise BindingError(f"[model] {key} in {path} must be a non-empty list of [feature, sign] pairs")
        out = []
        for item in raw:
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not isinstance(item[0], str)
                or item[1] not in (1, -1)
                or isinstance(item[1], bool)
            ):
                raise BindingError(f"[model] {key} in {path}: bad term {item!r}")
            out.append((item[0], int(item[1])))
        return tuple(out)

    if isinstance(table, dict) and set(table) - {"positive_terms", "negative_terms"}:
        raise BindingError(f"[model] in {path} accepts only positive_terms and negative_terms")
    return MoodModel(positive_terms=terms("positive_terms"), negative_terms=terms("negative_terms"))


def load_bindings(path: Path | None) -> tuple[MoodModel, SelfPresentationModel]:
    """Mood model and self-presentation model from a bindings file.

    ``[bindings]`` maps NE, SW, AW, SaW, Nu, TP, PF, PE, Fa, QM to feature names;
    unlisted symbols keep their default. ``[model]`` instead lists signed terms
    directly, as written by ``select-features``. ``[self_presentation]``
    overrides fields of SelfPresentationModel.
    """
    if path is None:
        return MoodModel.from_bindings(DEFAULT_BINDINGS), SelfPresentationModel()

    data = read_toml(path, "bindings file")
    unknown_tables = set(data) - {"bindings", "model", "self_presentation"}
    if unknown_tables:
        raise ConfigError(f"unknown tables in {path}: {', '.join(sorted(unknown_tables))}")

    if "model" in data:
        if "bindings" in data:
            raise BindingError(f"{path} has both [bindings] and [model]; keep one")
        model = _model_from_table(data["model"], path)
    else:
        bindings = data.get("bindings", {})
        if not isinstance(bindings, dict) or not all(isinstance(v, str) for v in bindings.values()):
            raise BindingError(f"[bindings] in {path} must map symbols ({', '.join(SYMBOLS)}) to feature names")
        model = MoodModel.from_bindings(bindings)

    sp_data = data.get("self_presentation", {})
    sp_fields = {f.name for f in fields(SelfPresentationModel)}
    if not isinstance(sp_data, dict) or set(sp_data) - sp_fields:
        raise ConfigError(f"[self_presentation] in {path} accepts only: {', '.join(sorted(sp_fields))}")
    try:
        sp_model = SelfPresentationModel(**sp_data)
    except TypeError as e:
        raise ConfigError(f"invalid [self_presentation] in {path}: {e}") from e
    return model, sp_model


def load_configured_lexicon(config: RunConfig) -> Lexicon:
    if config.lexicon_path is None:
        return load_micro_lexicon()
    return load_lexicon(config.lexicon_path)
