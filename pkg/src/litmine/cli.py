"""Command-line interface: every pipeline stage as a subcommand, plus
`pipeline` to chain them, `serve` for the HTTP API, `stats`, `eval`,
and `synth` to materialize the bundled synthetic corpus.

All provider/network access is off unless `--providers <config>` points
at a provider config; without it every stage runs against the
deterministic offline reference providers.
"""

import json
import sys
from pathlib import Path

import click

from litmine import pipeline as pl
from litmine import records
from litmine.catalog import stats_to_data
from litmine.evaluation import evaluate, load_benchmark
from litmine.providers import SearchFixtureStore, config_digest, load_providers
from litmine.synth import build_synthetic_corpus
from litmine.textutil import normalize_label


def _providers(config: str | None):
    return load_providers(config)


def _echo_summaries(summaries) -> None:
    for summary in summaries:
        click.echo(summary.line())


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Literature-to-catalog pipeline for urban dataset discovery."""


_input_opt = click.option(
    "--input", "input_dir", type=click.Path(path_type=Path), required=True,
    help="corpus directory holding article files and manifest.json",
)
_out_opt = click.option(
    "--out", "out_dir", type=click.Path(path_type=Path), required=True,
    help="run directory for stage outputs",
)
_providers_opt = click.option(
    "--providers", "providers_path", type=click.Path(path_type=Path), default=None,
    help="provider config JSON (omit for offline reference providers)",
)
_jobs_opt = click.option("--jobs", type=int, default=1, show_default=True)
_resume_opt = click.option(
    "--resume/--no-resume", default=True, show_default=True,
    help="skip work the manifest already marks done",
)
_profile_opt = click.option(
    "--profile", type=click.Choice(["offline", "live"]), default="offline",
    show_default=True,
    help="live enables the judge-backed normalization cross-check",
)


@main.command()
@_input_opt
@_out_opt
@_providers_opt
@_jobs_opt
@_resume_opt
def ingest(input_dir, out_dir, providers_path, jobs, resume):
    """Parse article files into canonical structured records."""
    try:
        summary = pl.stage_ingest(
            input_dir, out_dir, jobs=jobs,
            providers_digest=config_digest(providers_path), resume=resume,
        )
    except pl.StageInputMissing as exc:
        _fail(str(exc))
    click.echo(summary.line())


@main.command()
@_out_opt
@_providers_opt
@_resume_opt
def gate(out_dir, providers_path, resume):
    """Apply the urban-relevance gate to parsed articles."""
    _run_stage(lambda p: pl.stage_gate(out_dir, p, resume=resume), providers_path)


@main.command()
@_out_opt
@_providers_opt
@_jobs_opt
@_resume_opt
def extract(out_dir, providers_path, jobs, resume):
    """Extract candidate data cards from gated articles."""
    _run_stage(lambda p: pl.stage_extract(out_dir, p, jobs=jobs, resume=resume), providers_path)


@main.command()
@_out_opt
@_providers_opt
@_jobs_opt
@_resume_opt
def verify(out_dir, providers_path, jobs, resume):
    """Ground extracted cards in their evidence quotes."""
    _run_stage(lambda p: pl.stage_verify(out_dir, p, jobs=jobs, resume=resume), providers_path)


@main.command()
@_out_opt
@_providers_opt
@_resume_opt
@_profile_opt
def refine(out_dir, providers_path, resume, profile):
    """Harmonize verified cards into catalog entries."""
    _run_stage(
        lambda p: pl.stage_refine(out_dir, p, profile=profile, resume=resume), providers_path
    )


@main.command()
@_out_opt
@_providers_opt
@_resume_opt
def link(out_dir, providers_path, resume):
    """Probe recorded URLs and replace dead ones under confidence."""
    _run_stage(lambda p: pl.stage_link(out_dir, p, resume=resume), providers_path)


def _run_stage(runner, providers_path):
    providers = _providers(providers_path)
    try:
        summary = runner(providers)
    except pl.StageInputMissing as exc:
        _fail(str(exc))
    click.echo(summary.line())


@main.command()
@_out_opt
@_providers_opt
@_resume_opt
def index(out_dir, providers_path, resume):
    """Upsert linked (or harmonized) entries into the catalog store."""
    providers = _providers(providers_path)
    try:
        inserted, replaced = pl.stage_index(out_dir, providers, resume=resume)
    except pl.StageInputMissing as exc:
        _fail(str(exc))
    click.echo(f"index: inserted={inserted} replaced={replaced}")


@main.command()
@_input_opt
@_out_opt
@_providers_opt
@_jobs_opt
@_resume_opt
@_profile_opt
def pipeline(input_dir, out_dir, providers_path, jobs, resume, profile):
    """Run every stage; a completed run is a manifest-driven no-op."""
    providers = _providers(providers_path)
    try:
        summaries = pl.run_pipeline(
            input_dir, out_dir, providers, jobs=jobs,
            providers_digest=config_digest(providers_path),
            profile=profile, resume=resume,
        )
    except pl.StageInputMissing as exc:
        _fail(str(exc))
    _echo_summaries(summaries)


@main.command()
@_out_opt
@_providers_opt
def stats(out_dir, providers_path):
    """Print corpus statistics for the indexed catalog."""
    providers = _providers(providers_path)
    catalog = pl.open_catalog(out_dir, providers)
    click.echo(json.dumps(stats_to_data(catalog.compute_stats()), indent=2, sort_keys=True))


@main.command()
@_out_opt
@_providers_opt
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8800, show_default=True)
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None,
              help="serve a built web UI from this directory at /")
@click.option("--cors-origin", multiple=True, default=("*",), show_default=True)
def serve(out_dir, providers_path, host, port, ui_dir, cors_origin):
    """Serve the catalog API (read-only) over HTTP."""
    import uvicorn

    from litmine.api import create_app

    providers = _providers(providers_path)
    catalog = pl.open_catalog(out_dir, providers)
    app = create_app(catalog, cors_origins=tuple(cors_origin),
                     ui_dir=str(ui_dir) if ui_dir else None)
    click.echo(f"serving catalog of {catalog.size} entries on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command(name="eval")
@_out_opt
@_providers_opt
@click.option("--benchmark", "benchmark_path", type=click.Path(path_type=Path), required=True)
@click.option("--stage", type=click.Choice(["extracted", "refined"]), default="refined",
              show_default=True, help="which pipeline output to evaluate")
@click.option("--search-fixtures", "search_fixtures", type=click.Path(path_type=Path),
              default=None, help="recorded engine results for the search comparison")
@click.option("--report-dir", type=click.Path(path_type=Path), default=None)
def eval_cmd(out_dir, providers_path, benchmark_path, stage, search_fixtures, report_dir):
    """Match pipeline outputs against a gold benchmark and report
    recall, field accuracy, and (optionally) the search comparison."""
    providers = _providers(providers_path)
    benchmarks = load_benchmark(benchmark_path)

    manifest = pl.RunManifest(out_dir / "manifest.json")
    by_title = {
        normalize_label(entry.get("title", "")): article_id
        for article_id, entry in manifest.articles().items()
        if entry.get("title")
    }

    extracted_by_paper = {}
    missing = []
    for bench in benchmarks:
        if bench.paper_id in extracted_by_paper:
            continue
        if bench.paper_id in manifest.articles():
            article_id = bench.paper_id
        elif bench.paper_title:
            article_id = by_title.get(normalize_label(bench.paper_title))
        else:
            article_id = None
        if article_id is None:
            missing.append(bench.paper_id)
            extracted_by_paper[bench.paper_id] = []
            continue
        extracted_by_paper[bench.paper_id] = _cards_for(out_dir, article_id, stage)
    if missing:
        click.echo(f"warning: no pipeline article for paper(s): {', '.join(sorted(set(missing)))}", err=True)

    fixtures = None
    if search_fixtures is not None:
        # the "fixture" engine serves relink, not the engine comparison
        fixtures = SearchFixtureStore.from_file(search_fixtures).without_engine("fixture")

    report = evaluate(
        benchmarks, extracted_by_paper, providers.embedding, providers.judge, fixtures
    )
    text = report.render_text()
    click.echo(text)
    target = report_dir or (out_dir / "reports")
    target.mkdir(parents=True, exist_ok=True)
    (target / "report.json").write_text(
        json.dumps(report.to_data(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (target / "report.txt").write_text(text, encoding="utf-8")
    click.echo(f"wrote {target / 'report.json'}")


def _cards_for(out_dir: Path, article_id: str, stage: str):
    if stage == "extracted":
        path = out_dir / "extracted" / f"{article_id}.json"
        if not path.exists():
            return []
        outcome = records.outcome_from_data(records.read_record(path, "extraction_outcome"))
        return list(outcome.cards)
    source_dir = "linked" if (out_dir / "linked").exists() else "harmonized"
    path = out_dir / source_dir / f"{article_id}.json"
    if not path.exists():
        return []
    data = records.read_record(path, "catalog_entry_set")
    return [records.entry_from_data(d).card for d in data.get("entries", [])]


@main.command()
@_out_opt
def synth(out_dir):
    """Write the bundled synthetic corpus (articles, gold benchmark,
    provider script, fixtures) into a directory."""
    corpus = build_synthetic_corpus(out_dir)
    click.echo(
        f"synthetic corpus: {len(corpus.articles)} articles, "
        f"{corpus.total_gold} gold datasets -> {corpus.root}"
    )
    click.echo(f"providers config: {corpus.providers_path}")


if __name__ == "__main__":
    main()
