"""File-based pipeline stages with a resumable run manifest.

Every stage reads the previous stage's record files and writes its own
under the run directory, so any intermediate state is inspectable and
diff-able. The manifest tracks one terminal status per article per
stage; rerunning a completed stage is a no-op, and deleting a stage's
outputs then rerunning just that stage reproduces them byte-identically
under reference providers (record files carry no timestamps).

Run directory layout:
    manifest.json           run manifest
    parsed/{id}.json        one record per parsed article
    gate/{id}.json          relevance decisions
    extracted/{id}.json     extraction outcomes
    verified/{id}.json      verified card sets
    harmonized/{id}.json    catalog entries (+ rejections.jsonl)
    linked/{id}.json        relinked entries (+ relink_audit.jsonl)
    store/                  the catalog record log
"""

import json
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from litmine import records
from litmine.articles import (
    FORMAT_HTML,
    FORMAT_STRUCTURED_TEXT,
    MalformedInput,
    gate_relevance,
    flatten_for_prompt,
    parse_article,
)
from litmine.catalog import Catalog
from litmine.extraction import UnparseableResponse, distinguish_original, extract_cards
from litmine.gazetteer import load_gazetteer
from litmine.harmonize import ArticleSource, Rejection, harmonize
from litmine.linking import relink
from litmine.providers import ProviderError, ProviderSet
from litmine.verification import verify_card

STAGES = ("parsed", "gated", "extracted", "verified", "harmonized", "linked", "indexed")

DONE = "done"
FAILED = "failed"
GATED_OUT = "gated_out"
UNDECIDED = "undecided"
EMPTY = "empty"


class StageInputMissing(Exception):
    """A stage was started before its inputs exist."""


@dataclass
class StageSummary:
    stage: str
    processed: int = 0
    skipped: int = 0
    failed: int = 0
    excluded: int = 0

    def line(self) -> str:
        return (
            f"{self.stage}: processed={self.processed} skipped={self.skipped} "
            f"failed={self.failed} excluded={self.excluded}"
        )


class RunManifest:
    """Per-article stage statuses; enough state to resume a run."""

    def __init__(self, path: Path, providers_digest: str = ""):
        self.path = path
        self.data: dict = {
            "run_id": uuid.uuid4().hex[:12],
            "providers_digest": providers_digest,
            "articles": {},
            "timings": {},
        }
        if path.exists():
            self.data = json.loads(path.read_text(encoding="utf-8"))
            if providers_digest and self.data.get("providers_digest") != providers_digest:
                # provider change invalidates nothing retroactively, but
                # record it so the mix is visible in the manifest
                self.data["providers_digest"] = providers_digest

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(
            json.dumps(self.data, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    def register_article(self, article_id: str, path: str, journal: str, year, title: str) -> None:
        self.data["articles"].setdefault(
            article_id,
            {"path": path, "journal": journal, "year": year, "title": title, "stages": {}, "reasons": {}},
        )

    def articles(self) -> dict:
        return self.data["articles"]

    def status(self, article_id: str, stage: str) -> str | None:
        entry = self.data["articles"].get(article_id)
        return entry["stages"].get(stage) if entry else None

    def set_status(self, article_id: str, stage: str, status: str, reason: str = "") -> None:
        entry = self.data["articles"][article_id]
        entry["stages"][stage] = status
        if reason:
            entry["reasons"][stage] = reason
        elif stage in entry["reasons"]:
            del entry["reasons"][stage]

    def record_timing(self, stage: str, seconds: float) -> None:
        self.data["timings"][stage] = round(seconds, 3)


def _load_manifest(out: Path, providers_digest: str = "") -> RunManifest:
    return RunManifest(out / "manifest.json", providers_digest)


def _read_input_manifest(input_dir: Path) -> list[dict]:
    path = input_dir / "manifest.json"
    if not path.exists():
        raise StageInputMissing(f"no input manifest at {path}")
    data = json.loads(path.read_text(encoding="utf-8"))
    rows = data.get("articles")
    if not isinstance(rows, list):
        raise StageInputMissing(f"{path} has no 'articles' list")
    return rows


def _format_hint(path: Path) -> str:
    return FORMAT_HTML if path.suffix.lower() in (".html", ".htm") else FORMAT_STRUCTURED_TEXT


# ------------------------------------------------------------------ ingest

def stage_ingest(
    input_dir: Path, out: Path, jobs: int = 1, providers_digest: str = "", resume: bool = True
) -> StageSummary:
    rows = _read_input_manifest(input_dir)
    manifest = _load_manifest(out, providers_digest)
    parsed_dir = out / "parsed"
    parsed_dir.mkdir(parents=True, exist_ok=True)
    summary = StageSummary("ingest")
    started = time.monotonic()

    def work(row: dict):
        rel_path = row["path"]
        source = input_dir / rel_path
        raw = source.read_bytes()
        article = parse_article(raw, _format_hint(source))
        return row, article.with_source(
            journal=str(row.get("journal", "")),
            publication_year=row.get("year"),
            source_path=rel_path,
        )

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = [(row, pool.submit(work, row)) for row in rows]
        for row, future in futures:
            try:
                row, article = future.result()
            except (MalformedInput, OSError) as exc:
                placeholder = f"unparsed:{row['path']}"
                manifest.register_article(
                    placeholder, row["path"], str(row.get("journal", "")), row.get("year"), ""
                )
                manifest.set_status(placeholder, "parsed", FAILED, reason=str(exc))
                summary.failed += 1
                continue
            manifest.register_article(
                article.article_id, row["path"], article.journal, article.publication_year, article.title
            )
            target = parsed_dir / f"{article.article_id}.json"
            if resume and manifest.status(article.article_id, "parsed") == DONE and target.exists():
                summary.skipped += 1
                continue
            records.write_record(target, "parsed_article", records.article_to_data(article))
            manifest.set_status(article.article_id, "parsed", DONE)
            summary.processed += 1

    manifest.record_timing("ingest", time.monotonic() - started)
    manifest.save()
    return summary


def _parsed_ids(manifest: RunManifest) -> list[str]:
    return sorted(
        aid for aid, entry in manifest.articles().items() if entry["stages"].get("parsed") == DONE
    )


def _load_article(out: Path, article_id: str):
    path = out / "parsed" / f"{article_id}.json"
    if not path.exists():
        raise StageInputMissing(f"missing parsed record {path}")
    return records.article_from_data(records.read_record(path, "parsed_article"))


# -------------------------------------------------------------------- gate

def stage_gate(out: Path, providers: ProviderSet, resume: bool = True) -> StageSummary:
    manifest = _load_manifest(out)
    ids = _parsed_ids(manifest)
    if not ids:
        raise StageInputMissing(f"no parsed articles under {out}; run ingest first")
    gate_dir = out / "gate"
    gate_dir.mkdir(parents=True, exist_ok=True)
    summary = StageSummary("gate")
    started = time.monotonic()

    for article_id in ids:
        target = gate_dir / f"{article_id}.json"
        if resume and manifest.status(article_id, "gated") in (DONE, GATED_OUT, UNDECIDED) and target.exists():
            summary.skipped += 1
            continue
        article = _load_article(out, article_id)
        try:
            with providers.limiter:
                decision = gate_relevance(article.title, article.abstract, providers.relevance)
        except ProviderError as exc:
            manifest.set_status(article_id, "gated", UNDECIDED, reason=str(exc))
            summary.excluded += 1
            continue
        records.write_record(target, "relevance_decision", records.decision_to_data(decision))
        if decision.is_urban_related:
            manifest.set_status(article_id, "gated", DONE)
            summary.processed += 1
        else:
            manifest.set_status(article_id, "gated", GATED_OUT)
            summary.excluded += 1

    manifest.record_timing("gate", time.monotonic() - started)
    manifest.save()
    return summary


def _ids_with(manifest: RunManifest, stage: str, statuses=(DONE,)) -> list[str]:
    return sorted(
        aid
        for aid, entry in manifest.articles().items()
        if entry["stages"].get(stage) in statuses
    )


# ----------------------------------------------------------------- extract

def stage_extract(out: Path, providers: ProviderSet, jobs: int = 1, resume: bool = True) -> StageSummary:
    manifest = _load_manifest(out)
    ids = _ids_with(manifest, "gated")
    if not ids and not _parsed_ids(manifest):
        raise StageInputMissing(f"no gated articles under {out}; run ingest and gate first")
    extracted_dir = out / "extracted"
    extracted_dir.mkdir(parents=True, exist_ok=True)
    summary = StageSummary("extract")
    started = time.monotonic()

    def work(article_id: str):
        article = _load_article(out, article_id)
        with providers.limiter:
            outcome = extract_cards(article, providers.completion)
        kept = tuple(
            card for card in outcome.cards if distinguish_original(card, providers.judge)
        )
        demoted = len(outcome.cards) - len(kept)
        warnings = outcome.parse_warnings
        if demoted:
            warnings = warnings + (f"demoted {demoted} derived-indicator card(s)",)
        return outcome.__class__(
            article_id=outcome.article_id,
            cards=kept,
            parse_warnings=warnings,
            raw_response=outcome.raw_response,
        )

    todo = []
    for article_id in ids:
        target = extracted_dir / f"{article_id}.json"
        if resume and manifest.status(article_id, "extracted") in (DONE, EMPTY) and target.exists():
            summary.skipped += 1
        else:
            todo.append(article_id)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = [(aid, pool.submit(work, aid)) for aid in todo]
        for article_id, future in futures:
            try:
                outcome = future.result()
            except (UnparseableResponse, ProviderError) as exc:
                manifest.set_status(article_id, "extracted", FAILED, reason=str(exc))
                summary.failed += 1
                continue
            records.write_record(
                extracted_dir / f"{article_id}.json",
                "extraction_outcome",
                records.outcome_to_data(outcome),
            )
            manifest.set_status(article_id, "extracted", DONE if outcome.cards else EMPTY)
            summary.processed += 1

    manifest.record_timing("extract", time.monotonic() - started)
    manifest.save()
    return summary


# ------------------------------------------------------------------ verify

def stage_verify(out: Path, providers: ProviderSet, jobs: int = 1, resume: bool = True) -> StageSummary:
    manifest = _load_manifest(out)
    ids = _ids_with(manifest, "extracted", (DONE, EMPTY))
    if not ids and not (out / "extracted").exists():
        raise StageInputMissing(f"no extraction outcomes under {out}; run extract first")
    verified_dir = out / "verified"
    verified_dir.mkdir(parents=True, exist_ok=True)
    summary = StageSummary("verify")
    started = time.monotonic()

    def work(article_id: str):
        outcome = records.outcome_from_data(
            records.read_record(out / "extracted" / f"{article_id}.json", "extraction_outcome")
        )
        article = _load_article(out, article_id)
        text = flatten_for_prompt(article)
        verified = []
        with providers.limiter:
            for card in outcome.cards:
                verified.append(verify_card(card, text, providers.judge))
        return verified

    todo = []
    for article_id in ids:
        target = verified_dir / f"{article_id}.json"
        if resume and manifest.status(article_id, "verified") == DONE and target.exists():
            summary.skipped += 1
        else:
            todo.append(article_id)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = [(aid, pool.submit(work, aid)) for aid in todo]
        for article_id, future in futures:
            try:
                verified = future.result()
            except ProviderError as exc:
                manifest.set_status(article_id, "verified", FAILED, reason=str(exc))
                summary.failed += 1
                continue
            records.write_record(
                verified_dir / f"{article_id}.json",
                "verified_card_set",
                {
                    "article_id": article_id,
                    "cards": [records.verified_to_data(v) for v in verified],
                },
            )
            manifest.set_status(article_id, "verified", DONE)
            summary.processed += 1

    manifest.record_timing("verify", time.monotonic() - started)
    manifest.save()
    return summary


# ------------------------------------------------------------------ refine

def make_cross_validator(judge):
    """Optional normalization veto pass (live profile): a parsed value
    that the judge cannot support from the card's own summary and raw
    text falls back to unparsed/unresolved."""

    def check(card, time, geo) -> set[str]:
        context = f"{card.summary} {card.time_coverage_raw} {card.geographic_coverage_raw}"
        vetoes: set[str] = set()
        if time.is_parsed():
            rendered = str(time.start[0]) if time.end is None else f"{time.start[0]} to {time.end[0]}"
            if not judge.field_supported("time", rendered, context):
                vetoes.add("time")
        if geo.is_resolved() and geo.country_codes:
            if not judge.field_supported("geo", card.geographic_coverage_raw, context):
                vetoes.add("geo")
        return vetoes

    return check


def stage_refine(
    out: Path, providers: ProviderSet, profile: str = "offline", resume: bool = True
) -> StageSummary:
    manifest = _load_manifest(out)
    ids = _ids_with(manifest, "verified")
    if not ids and not (out / "verified").exists():
        raise StageInputMissing(f"no verified cards under {out}; run verify first")
    harmonized_dir = out / "harmonized"
    harmonized_dir.mkdir(parents=True, exist_ok=True)
    gazetteer = load_gazetteer()
    cross_validate = make_cross_validator(providers.judge) if profile == "live" else None
    summary = StageSummary("refine")
    started = time.monotonic()
    rejections: list[Rejection] = []

    for article_id in ids:
        target = harmonized_dir / f"{article_id}.json"
        if resume and manifest.status(article_id, "harmonized") == DONE and target.exists():
            summary.skipped += 1
            continue
        data = records.read_record(out / "verified" / f"{article_id}.json", "verified_card_set")
        meta = manifest.articles()[article_id]
        source = ArticleSource(
            article_id=article_id,
            title=meta.get("title", ""),
            journal=meta.get("journal", ""),
            publication_year=meta.get("year"),
        )
        entries = []
        for item in data.get("cards", []):
            verified = records.verified_from_data(item)
            if not verified.retained:
                continue
            result = harmonize(
                verified.card,
                source,
                gazetteer,
                evidence_contexts=verified.evidence_contexts,
                cross_validate=cross_validate,
            )
            if isinstance(result, Rejection):
                rejections.append(result)
            else:
                entries.append(result)
        records.write_record(
            target,
            "catalog_entry_set",
            {"article_id": article_id, "entries": [records.entry_to_data(e) for e in entries]},
        )
        manifest.set_status(article_id, "harmonized", DONE)
        summary.processed += 1

    if rejections:
        with open(harmonized_dir / "rejections.jsonl", "a", encoding="utf-8") as fh:
            for rejection in rejections:
                fh.write(
                    json.dumps(records.rejection_to_data(rejection), sort_keys=True) + "\n"
                )

    manifest.record_timing("refine", time.monotonic() - started)
    manifest.save()
    return summary


# -------------------------------------------------------------------- link

def stage_link(out: Path, providers: ProviderSet, resume: bool = True) -> StageSummary:
    manifest = _load_manifest(out)
    ids = _ids_with(manifest, "harmonized")
    if not ids and not (out / "harmonized").exists():
        raise StageInputMissing(f"no harmonized entries under {out}; run refine first")
    linked_dir = out / "linked"
    linked_dir.mkdir(parents=True, exist_ok=True)
    gazetteer = load_gazetteer()
    summary = StageSummary("link")
    started = time.monotonic()
    audits = []

    for article_id in ids:
        target = linked_dir / f"{article_id}.json"
        if resume and manifest.status(article_id, "linked") == DONE and target.exists():
            summary.skipped += 1
            continue
        data = records.read_record(out / "harmonized" / f"{article_id}.json", "catalog_entry_set")
        entries = [records.entry_from_data(d) for d in data.get("entries", [])]
        updated = []
        for entry in entries:
            try:
                with providers.limiter:
                    new_entry, audit = relink(
                        entry,
                        providers.search,
                        providers.embedding,
                        providers.url_probe,
                        gazetteer=gazetteer,
                    )
            except ProviderError as exc:
                new_entry, audit = entry, None
                manifest.set_status(article_id, "linked", FAILED, reason=str(exc))
            updated.append(new_entry)
            if audit is not None:
                audits.append(audit)
        records.write_record(
            target,
            "catalog_entry_set",
            {"article_id": article_id, "entries": [records.entry_to_data(e) for e in updated]},
        )
        if manifest.status(article_id, "linked") != FAILED:
            manifest.set_status(article_id, "linked", DONE)
            summary.processed += 1
        else:
            summary.failed += 1

    if audits:
        with open(linked_dir / "relink_audit.jsonl", "a", encoding="utf-8") as fh:
            for audit in audits:
                fh.write(
                    json.dumps(
                        {
                            "entry_id": audit.entry_id,
                            "old_url": audit.old_url,
                            "new_url": audit.new_url,
                            "before": audit.link_status_before,
                            "after": audit.link_status_after,
                            "candidates": [
                                {
                                    "url": c.hit.url,
                                    "rank": c.hit.rank,
                                    "relevance": round(c.relevance, 4),
                                    "consistency": round(c.consistency, 4),
                                    "accepted": c.accepted,
                                }
                                for c in audit.candidates
                            ],
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )

    manifest.record_timing("link", time.monotonic() - started)
    manifest.save()
    return summary


# ------------------------------------------------------------------- index

def load_stage_entries(out: Path, stage_dir: str = "linked"):
    """All catalog entries emitted by a stage, sorted by entry_id."""
    directory = out / stage_dir
    if not directory.exists():
        raise StageInputMissing(f"no {stage_dir} outputs under {out}")
    entries = []
    for path in sorted(directory.glob("*.json")):
        data = records.read_record(path, "catalog_entry_set")
        entries.extend(records.entry_from_data(d) for d in data.get("entries", []))
    entries.sort(key=lambda e: e.entry_id)
    return entries


def stage_index(out: Path, providers: ProviderSet, resume: bool = True) -> tuple[int, int]:
    manifest = _load_manifest(out)
    source_dir = "linked" if (out / "linked").exists() else "harmonized"
    source_ids = _ids_with(manifest, source_dir)
    store_dir = out / "store"
    if (
        resume
        and store_dir.exists()
        and source_ids
        and all(manifest.status(aid, "indexed") == DONE for aid in source_ids)
    ):
        return (0, 0)  # completed per manifest; the store stands
    entries = load_stage_entries(out, source_dir)
    catalog = Catalog(providers.embedding, store_dir=store_dir)
    counts = catalog.upsert(entries)
    for article_id in source_ids:
        manifest.set_status(article_id, "indexed", DONE)
    manifest.save()
    return counts


def open_catalog(out: Path, providers: ProviderSet) -> Catalog:
    return Catalog(providers.embedding, store_dir=out / "store")


# ---------------------------------------------------------------- pipeline

def run_pipeline(
    input_dir: Path,
    out: Path,
    providers: ProviderSet,
    jobs: int = 1,
    providers_digest: str = "",
    profile: str = "offline",
    resume: bool = True,
) -> list[StageSummary]:
    summaries = [
        stage_ingest(input_dir, out, jobs=jobs, providers_digest=providers_digest, resume=resume)
    ]
    summaries.append(stage_gate(out, providers, resume=resume))
    summaries.append(stage_extract(out, providers, jobs=jobs, resume=resume))
    summaries.append(stage_verify(out, providers, jobs=jobs, resume=resume))
    summaries.append(stage_refine(out, providers, profile=profile, resume=resume))
    summaries.append(stage_link(out, providers, resume=resume))
    inserted, replaced = stage_index(out, providers, resume=resume)
    index_summary = StageSummary("index", processed=inserted + replaced)
    summaries.append(index_summary)
    return summaries
