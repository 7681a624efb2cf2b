#!/usr/bin/env python3
"""
moodco - emotional loading and coherence of social-media texts

Usage:
    moodco generate --out corpus.jsonl --profiles 50 --posts 600 --coupling 0.5
    moodco score --corpus corpus.jsonl --output-dir out/
    moodco coherence --corpus corpus.jsonl --output-dir out/
    moodco compare-posts --corpus corpus.jsonl --output-dir out/
    moodco select-features --criterion-file criterion.csv --output-dir out/
    moodco features-dump --corpus corpus.jsonl --output-dir out/

Settings come from a TOML config file (--config, else $MOODCO_CONFIG) and are
overridden by flags. Exit status: 0 success, 1 configuration error, 2 data or
statistics error.
"""

import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Iterator, Optional

import typer
from rich.align import Align
from rich.console import Console
from rich.live import Live
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.tree import Tree
from typer.core import TyperGroup

from .config import CoherenceUnit, OutputFormat, RunConfig, load_bindings, load_configured_lexicon, load_run_config
from .corpus import Profile, load_corpus, save_corpus
from .errors import ConfigError, DataError, DegenerateStatisticsError
from .mood import TiePolicy
from .pipeline import (
    analyze_criterion_sample,
    compare_emotional_vs_neutral,
    compare_female_vs_male,
    compare_negative_vs_positive,
    coherence,
    criterion_sample_csv,
    empathy_split_and_compare,
    load_criterion_sample,
    pooled_coherence,
    profile_self_presentation,
    score_corpus,
    select_features,
)
from .reports import atomic_write_text, write_csv, write_json
from .report_tables import (
    COHERENCE_FIELDS,
    COMPARISON_FIELDS,
    PREDICTOR_FIELDS,
    SCORE_FIELDS,
    coherence_rows,
    comparison_rows,
    feature_rows,
    mood_model_toml,
    predictor_rows,
    score_rows,
)
from .synthetic import ContagionConfig, CriterionConfig, generate_contagion_corpus, generate_criterion_sample
from .textfeatures import analyze_profile

BANNER = """
█▀▄▀█ █▀█ █▀█ █▀▄ █▀▀ █▀█
█ ▀ █ █▄█ █▄█ █▄▀ █▄▄ █▄█
"""

TAGLINE = "Mood indicators and emotional coherence for social-media corpora"

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("moodco")

_state = {"quiet": False}


class StepTracker:
    """Track pipeline stages and render them as a tree.
    Supports live refresh via an attached callback.
    """

    SYMBOLS = {
        "pending": "[green dim]○[/green dim]",
        "running": "[cyan]○[/cyan]",
        "done": "[green]●[/green]",
        "error": "[red]●[/red]",
        "skipped": "[yellow]○[/yellow]",
    }

    def __init__(self, title: str):
        self.title = title
        self.steps: list[dict] = []
        self._refresh_cb = None

    def attach_refresh(self, cb):
        self._refresh_cb = cb

    def add(self, key: str, label: str):
        if key not in [s["key"] for s in self.steps]:
            self.steps.append({"key": key, "label": label, "status": "pending", "detail": ""})
            self._maybe_refresh()

    def start(self, key: str, detail: str = ""):
        self._update(key, "running", detail)

    def complete(self, key: str, detail: str = ""):
        self._update(key, "done", detail)

    def error(self, key: str, detail: str = ""):
        self._update(key, "error", detail)

    def skip(self, key: str, detail: str = ""):
        self._update(key, "skipped", detail)

    def running(self) -> str | None:
        return next((s["key"] for s in self.steps if s["status"] == "running"), None)

    def _update(self, key: str, status: str, detail: str):
        for s in self.steps:
            if s["key"] == key:
                s["status"] = status
                if detail:
                    s["detail"] = detail
                break
        else:
            self.steps.append({"key": key, "label": key, "status": status, "detail": detail})
        self._maybe_refresh()

    def _maybe_refresh(self):
        if self._refresh_cb:
            try:
                self._refresh_cb()
            except Exception:
                pass

    def render(self) -> Tree:
        tree = Tree(f"[cyan]{self.title}[/cyan]", guide_style="grey50")
        for step in self.steps:
            symbol = self.SYMBOLS.get(step["status"], " ")
            detail = escape(step["detail"].strip())
            if step["status"] == "pending":
                text = f"{step['label']} ({detail})" if detail else step["label"]
                tree.add(f"{symbol} [bright_black]{text}[/bright_black]")
            elif detail:
                tree.add(f"{symbol} [white]{step['label']}[/white] [bright_black]({detail})[/bright_black]")
            else:
                tree.add(f"{symbol} [white]{step['label']}[/white]")
        return tree


class BannerGroup(TyperGroup):
    """Custom group that shows banner before help."""

    def format_help(self, ctx, formatter):
        show_banner()
        super().format_help(ctx, formatter)


app = typer.Typer(
    name="moodco",
    help="Score mood indicators and measure post/comment emotional coherence",
    add_completion=False,
    invoke_without_command=True,
    cls=BannerGroup,
)


def show_banner():
    """Display the banner on standard error."""
    colors = ["bright_blue", "cyan"]
    styled = Text()
    for i, line in enumerate(BANNER.strip("\n").split("\n")):
        styled.append(line + "\n", style=colors[i % len(colors)])
    err_console.print(Align.center(styled))
    err_console.print(Align.center(Text(TAGLINE, style="italic bright_yellow")))
    err_console.print()


def _configure_logging(debug: bool):
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False, show_time=False)],
        force=True,
    )


@app.callback()
def callback(
    ctx: typer.Context,
    debug: bool = typer.Option(False, "--debug", help="Verbose diagnostic logging on standard error"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Do not render the progress tree"),
):
    """Show banner when no subcommand is provided."""
    _configure_logging(debug)
    _state["quiet"] = quiet
    if ctx.invoked_subcommand is None and "--help" not in sys.argv and "-h" not in sys.argv:
        show_banner()
        err_console.print(Align.center("[dim]Run 'moodco --help' for usage information[/dim]"))
        err_console.print()


ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="TOML config file (default: $MOODCO_CONFIG)")]
LexiconOpt = Annotated[Optional[Path], typer.Option("--lexicon", help="Lexicon file (default: shipped micro-lexicon)")]
BindingsOpt = Annotated[Optional[Path], typer.Option("--bindings", help="Mood bindings TOML file")]
CorpusOpt = Annotated[Optional[Path], typer.Option("--corpus", help="JSON-Lines corpus file")]
OutputDirOpt = Annotated[Optional[Path], typer.Option("--output-dir", "-o", help="Directory for reports")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Seed for every stochastic step")]
TieOpt = Annotated[Optional[TiePolicy], typer.Option("--tie-policy", help="Label for nonzero positive/negative ties")]
UnitOpt = Annotated[Optional[CoherenceUnit], typer.Option("--coherence-unit", help="Count comments or per-post mean comment mood")]
JobsOpt = Annotated[Optional[int], typer.Option("--jobs", "-j", help="Worker processes for per-profile scoring")]
FormatOpt = Annotated[Optional[OutputFormat], typer.Option("--format", help="Report format")]
RequireCommentsOpt = Annotated[
    Optional[bool],
    typer.Option("--require-comments/--all-text-posts", help="Drop text posts without comments before scoring"),
]


def _fail(message: str, code: int):
    err_console.print(f"[red]Error:[/red] {escape(message)}", soft_wrap=True)
    raise typer.Exit(code)


@contextmanager
def _tracked(title: str, steps: list[tuple[str, str]]) -> Iterator[StepTracker]:
    """Run a command body under a live StepTracker; map errors to exit codes."""
    tracker = StepTracker(title)
    for key, label in steps:
        tracker.add(key, label)
    code = 0
    message = ""
    with Live(tracker.render(), console=err_console, refresh_per_second=8, transient=True) as live:
        tracker.attach_refresh(lambda: live.update(tracker.render()))
        try:
            yield tracker
        except ConfigError as e:
            code, message = 1, str(e)
        except DataError as e:
            code, message = 2, str(e)
        if code:
            key = tracker.running()
            if key:
                tracker.error(key, "failed")
    if not _state["quiet"]:
        err_console.print(tracker.render())
    if code:
        _fail(message, code)


def _load_config(config_path: Optional[Path], *, need_corpus: bool = False, **overrides) -> RunConfig:
    try:
        return load_run_config(config_path, overrides).validate(need_corpus=need_corpus)
    except ConfigError as e:
        _fail(str(e), 1)


def _load_nonempty_corpus(config: RunConfig) -> list[Profile]:
    profiles = load_corpus(config.corpus_path)
    if not profiles:
        raise DataError(f"corpus {config.corpus_path} contains no profiles")
    return profiles


@app.command()
def score(
    config_path: ConfigOpt = None,
    lexicon: LexiconOpt = None,
    bindings: BindingsOpt = None,
    corpus: CorpusOpt = None,
    output_dir: OutputDirOpt = None,
    tie_policy: TieOpt = None,
    require_comments: RequireCommentsOpt = None,
    jobs: JobsOpt = None,
):
    """
    Score and label every eligible post and comment.

    Writes scores.csv (one row per post and per comment) and score_summary.json.
    """
    cfg = _load_config(
        config_path,
        need_corpus=True,
        lexicon_path=lexicon,
        bindings_path=bindings,
        corpus_path=corpus,
        output_dir=output_dir,
        tie_policy=tie_policy,
        require_comments=require_comments,
        jobs=jobs,
    )
    with _tracked("Score corpus", [("load", "Load inputs"), ("score", "Score posts and comments"), ("write", "Write reports")]) as t:
        t.start("load")
        lex = load_configured_lexicon(cfg)
        model, _ = load_bindings(cfg.bindings_path)
        profiles = _load_nonempty_corpus(cfg)
        t.complete("load", f"{len(profiles)} profiles")

        t.start("score")
        scores = score_corpus(profiles, lex, model, tie_policy=cfg.tie_policy, require_comments=cfg.require_comments, jobs=cfg.jobs)
        s = scores.summary
        t.complete("score", f"{s.eligible_posts} posts, {s.eligible_comments} comments")

        t.start("write")
        write_csv(cfg.output_dir / "scores.csv", score_rows(scores), SCORE_FIELDS)
        write_json(cfg.output_dir / "score_summary.json", s)
        t.complete("write", str(cfg.output_dir))


@app.command("select-features")
def select_features_cmd(
    criterion_file: Annotated[Path, typer.Option("--criterion-file", help="CSV with text,label columns")],
    config_path: ConfigOpt = None,
    lexicon: LexiconOpt = None,
    output_dir: OutputDirOpt = None,
    alpha: Annotated[Optional[float], typer.Option("--alpha", help="ANOVA significance level; 1.0 keeps everything")] = None,
    scheffe_alpha: Annotated[Optional[float], typer.Option("--scheffe-alpha", help="Scheffé significance level")] = None,
    fmt: FormatOpt = None,
):
    """
    Select the categories that discriminate mood conditions in a criterion sample.

    Writes selected_features.json (sorted by descending F) and mood_model.toml
    with the indicators derived from the discriminating categories.
    """
    cfg = _load_config(config_path, lexicon_path=lexicon, output_dir=output_dir, alpha=alpha, scheffe_alpha=scheffe_alpha, format=fmt)
    with _tracked("Select features", [("load", "Load criterion sample"), ("anova", "ANOVA + Scheffé"), ("write", "Write reports")]) as t:
        t.start("load")
        lex = load_configured_lexicon(cfg)
        sample = load_criterion_sample(criterion_file)
        t.complete("load", ", ".join(f"{k.value}={v}" for k, v in sample.counts.items()))

        t.start("anova")
        selected = select_features(sample, analyze_criterion_sample(sample, lex), cfg.alpha, scheffe_alpha=cfg.scheffe_alpha)
        t.complete("anova", f"{len(selected.predictors)} significant")

        t.start("write")
        write_json(cfg.output_dir / "selected_features.json", selected)
        if cfg.format is OutputFormat.CSV:
            write_csv(cfg.output_dir / "selected_features.csv", predictor_rows(selected), PREDICTOR_FIELDS)
        try:
            atomic_write_text(cfg.output_dir / "mood_model.toml", mood_model_toml(selected.mood_model()))
        except ConfigError as e:
            logger.warning("No mood model written: %s", e)
            t.complete("write", f"{cfg.output_dir} (no mood model)")
        else:
            t.complete("write", str(cfg.output_dir))


@app.command("coherence")
def coherence_cmd(
    config_path: ConfigOpt = None,
    lexicon: LexiconOpt = None,
    bindings: BindingsOpt = None,
    corpus: CorpusOpt = None,
    output_dir: OutputDirOpt = None,
    empathy_threshold: Annotated[Optional[float], typer.Option("--empathy-threshold", help="Chi-square at or above which a profile is highly empathetic")] = None,
    tie_policy: TieOpt = None,
    unit: UnitOpt = None,
    require_comments: RequireCommentsOpt = None,
    jobs: JobsOpt = None,
    fmt: FormatOpt = None,
):
    """
    Per-profile emotional coherence, pooled coherence and the empathy split.

    Writes coherence.json with one entry per profile, the pooled tables in both
    counting units and the low vs high empathy comparison.
    """
    cfg = _load_config(
        config_path,
        need_corpus=True,
        lexicon_path=lexicon,
        bindings_path=bindings,
        corpus_path=corpus,
        output_dir=output_dir,
        empathy_threshold=empathy_threshold,
        tie_policy=tie_policy,
        coherence_unit=unit,
        require_comments=require_comments,
        jobs=jobs,
        format=fmt,
    )
    steps = [
        ("load", "Load inputs"),
        ("score", "Score posts and comments"),
        ("chi2", "Per-profile chi-square"),
        ("split", "Empathy split"),
        ("write", "Write reports"),
    ]
    with _tracked("Emotional coherence", steps) as t:
        t.start("load")
        lex = load_configured_lexicon(cfg)
        model, sp_model = load_bindings(cfg.bindings_path)
        profiles = _load_nonempty_corpus(cfg)
        t.complete("load", f"{len(profiles)} profiles")

        t.start("score")
        scores = score_corpus(profiles, lex, model, tie_policy=cfg.tie_policy, require_comments=cfg.require_comments, jobs=cfg.jobs)
        t.complete("score")

        t.start("chi2")
        opts = dict(threshold=cfg.empathy_threshold, tie_policy=cfg.tie_policy)
        results = [coherence(p, unit=cfg.coherence_unit, **opts) for p in scores.profiles]
        pooled = {u.value: pooled_coherence(scores.profiles, unit=u, **opts) for u in CoherenceUnit}
        flagged = sum(r.highly_empathetic for r in results)
        t.complete("chi2", f"{flagged} of {len(results)} highly empathetic")

        t.start("split")
        split, split_error = None, None
        features = {p.profile_id: analyze_profile(p, lex) for p in profiles}
        try:
            sp_scores = profile_self_presentation(features, sp_model)
        except DegenerateStatisticsError as e:
            logger.warning("Self-presentation scores skipped: %s", e)
            sp_scores = None
        metrics = None
        if all(p.metrics is not None for p in profiles):
            metrics = {p.profile_id: p.metrics for p in profiles}
        else:
            logger.warning("Facebook metrics absent for some profiles; metric comparisons skipped")
        try:
            split = empathy_split_and_compare(
                results, features, metrics, sp_scores, {p.profile_id: p.gender for p in profiles}
            )
            t.complete("split", f"median {split.median:.4g}")
        except DegenerateStatisticsError as e:
            split_error = str(e)
            logger.warning("Empathy split skipped: %s", e)
            t.skip("split", split_error)

        t.start("write")
        report = {
            "threshold": cfg.empathy_threshold,
            "unit": cfg.coherence_unit,
            "tie_policy": cfg.tie_policy,
            "n_profiles": len(results),
            "n_determinate": sum(not r.indeterminate for r in results),
            "n_highly_empathetic": flagged,
            "profiles": results,
            "pooled": pooled,
            "split": split,
            "split_error": split_error,
        }
        write_json(cfg.output_dir / "coherence.json", report)
        if cfg.format is OutputFormat.CSV:
            write_csv(cfg.output_dir / "coherence.csv", coherence_rows(results), COHERENCE_FIELDS)
        t.complete("write", str(cfg.output_dir))


COMPARISONS = {
    "negative_vs_positive": compare_negative_vs_positive,
    "neutral_vs_emotional": compare_emotional_vs_neutral,
    "female_vs_male": compare_female_vs_male,
}


@app.command("compare-posts")
def compare_posts_cmd(
    config_path: ConfigOpt = None,
    lexicon: LexiconOpt = None,
    bindings: BindingsOpt = None,
    corpus: CorpusOpt = None,
    output_dir: OutputDirOpt = None,
    seed: SeedOpt = None,
    tie_policy: TieOpt = None,
    require_comments: RequireCommentsOpt = None,
    jobs: JobsOpt = None,
    fmt: FormatOpt = None,
):
    """
    Bootstrap-balanced t-tests between post groups.

    Compares negative vs positive posts, neutral vs emotional posts and posts of
    female vs male profiles. A comparison with an empty group is reported under
    "errors"; the command fails only when every comparison does.
    """
    cfg = _load_config(
        config_path,
        need_corpus=True,
        lexicon_path=lexicon,
        bindings_path=bindings,
        corpus_path=corpus,
        output_dir=output_dir,
        seed=seed,
        tie_policy=tie_policy,
        require_comments=require_comments,
        jobs=jobs,
        format=fmt,
    )
    steps = [("load", "Load inputs"), ("score", "Score posts and comments"), ("compare", "Compare post groups"), ("write", "Write reports")]
    with _tracked("Compare posts", steps) as t:
        t.start("load")
        lex = load_configured_lexicon(cfg)
        model, _ = load_bindings(cfg.bindings_path)
        profiles = _load_nonempty_corpus(cfg)
        t.complete("load", f"{len(profiles)} profiles")

        t.start("score")
        scores = score_corpus(profiles, lex, model, tie_policy=cfg.tie_policy, require_comments=cfg.require_comments, jobs=cfg.jobs)
        t.complete("score")

        t.start("compare")
        report: dict = {"seed": cfg.seed, "errors": {}}
        for name, compare in COMPARISONS.items():
            try:
                report[name] = compare(scores, cfg.seed)
            except DegenerateStatisticsError as e:
                logger.warning("Skipping %s: %s", name, e)
                report[name] = []
                report["errors"][name] = str(e)
        if len(report["errors"]) == len(COMPARISONS):
            raise DegenerateStatisticsError("; ".join(report["errors"].values()))
        t.complete("compare")

        t.start("write")
        if cfg.format is OutputFormat.CSV:
            rows = [row for name in COMPARISONS for row in comparison_rows(report[name])]
            write_csv(cfg.output_dir / "compare_posts.csv", rows, COMPARISON_FIELDS)
        else:
            write_json(cfg.output_dir / "compare_posts.json", report)
        t.complete("write", str(cfg.output_dir))


@app.command()
def generate(
    out: Annotated[Path, typer.Option("--out", help="Output file (JSONL corpus, or CSV with --criterion)")],
    config_path: ConfigOpt = None,
    seed: SeedOpt = None,
    profiles: Annotated[int, typer.Option("--profiles", help="Number of profiles")] = 50,
    posts: Annotated[int, typer.Option("--posts", help="Posts per profile")] = 600,
    comments_mean: Annotated[float, typer.Option("--comments-mean", help="Mean comments per post")] = 2.0,
    p_positive: Annotated[float, typer.Option("--p-positive", help="Probability an emotional post is positive")] = 0.57,
    coupling: Annotated[float, typer.Option("--coupling", help="Probability a comment copies its post's mood")] = 0.5,
    p_neutral_post: Annotated[float, typer.Option("--p-neutral-post")] = 0.0,
    p_neutral_comment: Annotated[float, typer.Option("--p-neutral-comment")] = 0.0,
    p_media_post: Annotated[float, typer.Option("--p-media-post", help="Share of photo/video/music/quote posts")] = 0.0,
    posts_jitter: Annotated[float, typer.Option("--posts-jitter", help="Relative spread of posts per profile")] = 0.0,
    high_coupling: Annotated[Optional[float], typer.Option("--high-coupling", help="Coupling of the high-coupling profiles")] = None,
    high_share: Annotated[float, typer.Option("--high-share")] = 0.5,
    high_post_factor: Annotated[float, typer.Option("--high-post-factor")] = 1.0,
    high_sexual_rate: Annotated[float, typer.Option("--high-sexual-rate")] = 0.0,
    emotional_likes_factor: Annotated[float, typer.Option("--emotional-likes-factor")] = 1.0,
    emotional_comments_factor: Annotated[float, typer.Option("--emotional-comments-factor")] = 1.0,
    criterion: Annotated[bool, typer.Option("--criterion", help="Write a planted criterion sample CSV instead")] = False,
    per_label: Annotated[int, typer.Option("--per-label", help="Criterion posts per label")] = 48,
):
    """
    Write a synthetic corpus with planted moods (deterministic per seed).
    """
    cfg = _load_config(config_path, seed=seed)
    with _tracked("Generate", [("generate", "Generate"), ("write", "Write output")]) as t:
        t.start("generate")
        if criterion:
            sample = generate_criterion_sample(CriterionConfig(n_per_label=per_label, seed=cfg.seed))
            t.complete("generate", f"{len(sample.posts)} criterion posts")
            t.start("write")
            atomic_write_text(out, criterion_sample_csv(sample))
        else:
            contagion = ContagionConfig(
                n_profiles=profiles,
                posts_per_profile=posts,
                comments_per_post_mean=comments_mean,
                p_positive_post=p_positive,
                coupling=coupling,
                seed=cfg.seed,
                p_neutral_post=p_neutral_post,
                p_neutral_comment=p_neutral_comment,
                p_media_post=p_media_post,
                posts_jitter=posts_jitter,
                high_coupling=high_coupling,
                high_coupling_share=high_share,
                high_post_factor=high_post_factor,
                high_sexual_rate=high_sexual_rate,
                emotional_likes_factor=emotional_likes_factor,
                emotional_comments_factor=emotional_comments_factor,
            )
            corpus = generate_contagion_corpus(contagion)
            t.complete("generate", f"{len(corpus)} profiles")
            t.start("write")
            save_corpus(corpus, out)
        t.complete("write", str(out))


@app.command("features-dump")
def features_dump(
    config_path: ConfigOpt = None,
    lexicon: LexiconOpt = None,
    corpus: CorpusOpt = None,
    output_dir: OutputDirOpt = None,
    require_comments: RequireCommentsOpt = None,
):
    """
    Dump per-post feature vectors to features.csv.
    """
    cfg = _load_config(config_path, need_corpus=True, lexicon_path=lexicon, corpus_path=corpus, output_dir=output_dir, require_comments=require_comments)
    with _tracked("Features dump", [("load", "Load inputs"), ("write", "Write features")]) as t:
        t.start("load")
        lex = load_configured_lexicon(cfg)
        profiles = _load_nonempty_corpus(cfg)
        t.complete("load", f"{len(profiles)} profiles")
        t.start("write")
        fields, rows = feature_rows(profiles, lex, cfg.require_comments)
        write_csv(cfg.output_dir / "features.csv", rows, fields)
        t.complete("write", f"{len(rows)} rows")


@app.command()
def version():
    """Display version and system information."""
    import importlib.metadata
    import platform

    cli_version = "unknown"
    try:
        cli_version = importlib.metadata.version("moodco")
    except Exception:
        # running from source
        try:
            import tomllib

            pyproject_path = Path(__file__).parent.parent.parent / "pyproject.toml"
            if pyproject_path.exists():
                with open(pyproject_path, "rb") as f:
                    cli_version = tomllib.load(f).get("project", {}).get("version", "unknown")
        except Exception:
            pass

    info_table = Table(show_header=False, box=None, padding=(0, 2))
    info_table.add_column("Key", style="cyan", justify="right")
    info_table.add_column("Value", style="white")
    info_table.add_row("moodco", cli_version)
    info_table.add_row("", "")
    info_table.add_row("Python", platform.python_version())
    info_table.add_row("Platform", platform.system())
    info_table.add_row("Architecture", platform.machine())

    console.print(Panel(info_table, title="[bold cyan]moodco[/bold cyan]", border_style="cyan", padding=(1, 2)))


def main():
    app()


if __name__ == "__main__":
    main()
