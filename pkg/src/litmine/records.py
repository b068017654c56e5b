"""Versioned on-disk record files for stage handoff.

Every pipeline stage writes JSON records of the shape
{"record": <kind>, "version": 1, "data": {...}} with sorted keys and a
trailing newline, so identical inputs produce byte-identical files and
stage outputs diff cleanly.
"""

import json
from pathlib import Path

from litmine.articles import ParsedArticle, RelevanceDecision
from litmine.extraction import ExtractionOutcome
from litmine.harmonize import (
    ArticleSource,
    CatalogEntry,
    GeoScope,
    Rejection,
    TimeRange,
)
from litmine.schema import DataCard, EvidenceSpan, card_from_record, card_to_record
from litmine.verification import LocalizationResult, VerifiedCard

RECORD_VERSION = 1


class RecordError(ValueError):
    pass


def dump_record(kind: str, data: dict) -> str:
    return (
        json.dumps(
            {"record": kind, "version": RECORD_VERSION, "data": data},
            sort_keys=True,
            ensure_ascii=False,
            indent=2,
        )
        + "\n"
    )


def write_record(path: str | Path, kind: str, data: dict) -> None:
    Path(path).write_text(dump_record(kind, data), encoding="utf-8")


def read_record(path: str | Path, kind: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("record") != kind:
        raise RecordError(f"{path}: expected {kind!r} record, got {obj.get('record')!r}")
    if obj.get("version") != RECORD_VERSION:
        raise RecordError(f"{path}: unsupported record version {obj.get('version')!r}")
    return obj["data"]


# ------------------------------------------------------------- articles

def article_to_data(a: ParsedArticle) -> dict:
    return {
        "article_id": a.article_id,
        "title": a.title,
        "abstract": a.abstract,
        "sections": [[h, b] for h, b in a.sections],
        "tables": [[c, t] for c, t in a.tables],
        "figure_captions": list(a.figure_captions),
        "supplementary": list(a.supplementary),
        "journal": a.journal,
        "publication_year": a.publication_year,
        "source_path": a.source_path,
    }


def article_from_data(d: dict) -> ParsedArticle:
    return ParsedArticle(
        article_id=d["article_id"],
        title=d["title"],
        abstract=d.get("abstract", ""),
        sections=tuple((h, b) for h, b in d.get("sections", [])),
        tables=tuple((c, t) for c, t in d.get("tables", [])),
        figure_captions=tuple(d.get("figure_captions", [])),
        supplementary=tuple(d.get("supplementary", [])),
        journal=d.get("journal", ""),
        publication_year=d.get("publication_year"),
        source_path=d.get("source_path", ""),
    )


def decision_to_data(d: RelevanceDecision) -> dict:
    return {
        "is_urban_related": d.is_urban_related,
        "rationale": d.rationale,
        "provider_id": d.provider_id,
    }


def decision_from_data(d: dict) -> RelevanceDecision:
    return RelevanceDecision(
        is_urban_related=bool(d["is_urban_related"]),
        rationale=d.get("rationale", ""),
        provider_id=d.get("provider_id", ""),
    )


# ------------------------------------------------------------ extraction

def outcome_to_data(o: ExtractionOutcome) -> dict:
    return {
        "article_id": o.article_id,
        "cards": [card_to_record(c) for c in o.cards],
        "parse_warnings": list(o.parse_warnings),
        "raw_response": o.raw_response,
    }


def outcome_from_data(d: dict) -> ExtractionOutcome:
    return ExtractionOutcome(
        article_id=d["article_id"],
        cards=tuple(card_from_record(c) for c in d.get("cards", [])),
        parse_warnings=tuple(d.get("parse_warnings", [])),
        raw_response=d.get("raw_response", ""),
    )


# ---------------------------------------------------------- verification

def _loc_to_data(loc: LocalizationResult) -> dict:
    return {
        "span": {
            "field": loc.span.field_name,
            "quote": loc.span.quote,
            "location": loc.span.claimed_location,
            "confidence": loc.span.confidence_label,
        },
        "status": loc.status,
        "offset": loc.offset,
        "end": loc.end,
        "similarity": loc.similarity,
    }


def _loc_from_data(d: dict) -> LocalizationResult:
    s = d["span"]
    return LocalizationResult(
        span=EvidenceSpan(
            field_name=s["field"],
            quote=s["quote"],
            claimed_location=s.get("location", ""),
            confidence_label=s.get("confidence", "medium"),
        ),
        status=d["status"],
        offset=d.get("offset"),
        end=d.get("end"),
        similarity=float(d.get("similarity", 0.0)),
    )


def verified_to_data(v: VerifiedCard) -> dict:
    return {
        "card": card_to_record(v.card),
        "field_verdicts": dict(sorted(v.field_verdicts.items())),
        "retained": v.retained,
        "localizations": [_loc_to_data(loc) for loc in v.localizations],
        "evidence_contexts": list(v.evidence_contexts),
    }


def verified_from_data(d: dict) -> VerifiedCard:
    return VerifiedCard(
        card=card_from_record(d["card"]),
        field_verdicts=dict(d.get("field_verdicts", {})),
        retained=bool(d["retained"]),
        localizations=tuple(_loc_from_data(x) for x in d.get("localizations", [])),
        evidence_contexts=tuple(d.get("evidence_contexts", [])),
    )


# ----------------------------------------------------------- harmonized

def time_to_data(t: TimeRange) -> dict:
    return {
        "start": list(t.start) if t.start else None,
        "end": list(t.end) if t.end else None,
        "open_ended": t.open_ended,
        "unparsed": t.unparsed,
    }


def time_from_data(d: dict) -> TimeRange:
    return TimeRange(
        start=tuple(d["start"]) if d.get("start") else None,
        end=tuple(d["end"]) if d.get("end") else None,
        open_ended=bool(d.get("open_ended", False)),
        unparsed=d.get("unparsed"),
    )


def geo_to_data(g: GeoScope) -> dict:
    return {
        "level": g.level,
        "country_codes": list(g.country_codes),
        "region_text": g.region_text,
        "unresolved": g.unresolved,
    }


def geo_from_data(d: dict) -> GeoScope:
    return GeoScope(
        level=d.get("level", "country"),
        country_codes=tuple(d.get("country_codes", [])),
        region_text=d.get("region_text"),
        unresolved=d.get("unresolved"),
    )


def entry_to_data(e: CatalogEntry) -> dict:
    return {
        "entry_id": e.entry_id,
        "card": card_to_record(e.card),
        "time": time_to_data(e.time),
        "geo": geo_to_data(e.geo),
        "source": {
            "article_id": e.source.article_id,
            "title": e.source.title,
            "journal": e.source.journal,
            "publication_year": e.source.publication_year,
        },
        "link_status": e.link_status,
        "reference_status": e.reference_status,
        "no_access_info": e.no_access_info(),
        "evidence_contexts": list(e.evidence_contexts),
    }


def entry_from_data(d: dict) -> CatalogEntry:
    src = d["source"]
    return CatalogEntry(
        entry_id=d["entry_id"],
        card=card_from_record(d["card"]),
        time=time_from_data(d["time"]),
        geo=geo_from_data(d["geo"]),
        source=ArticleSource(
            article_id=src["article_id"],
            title=src.get("title", ""),
            journal=src.get("journal", ""),
            publication_year=src.get("publication_year"),
        ),
        link_status=d["link_status"],
        reference_status=d.get("reference_status", "missing"),
        evidence_contexts=tuple(d.get("evidence_contexts", [])),
    )


def rejection_to_data(r: Rejection) -> dict:
    return {
        "article_id": r.article_id,
        "dataset_id": r.dataset_id,
        "reason": r.reason,
        "detail": r.detail,
    }


def rejection_from_data(d: dict) -> Rejection:
    return Rejection(
        article_id=d["article_id"],
        dataset_id=d["dataset_id"],
        reason=d["reason"],
        detail=d.get("detail", ""),
    )
