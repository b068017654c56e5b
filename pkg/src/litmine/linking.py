"""External resource linking: replace dead or missing dataset URLs with
web-search candidates, only under dual-threshold confidence.

The agent probes the recorded URL first (live links are never touched),
rebuilds a concise dataset description from the harmonized entry,
queries the search provider, and scores every hit twice: relevance
(similarity to the dataset description) and consistency (similarity to
the card's located evidence context). A replacement must clear both
thresholds; otherwise the entry keeps its literature reference as the
fallback.
"""

from dataclasses import dataclass, replace
from urllib.parse import urlparse

from litmine.harmonize import (
    CatalogEntry,
    GEO_GLOBAL,
    LINK_ORIGINAL,
    LINK_REFERENCE_ONLY,
    LINK_VERIFIED,
)
from litmine.gazetteer import Gazetteer, load_gazetteer
from litmine.providers.base import EmbeddingProvider, SearchHit, SearchProvider, UrlProbe
from litmine.providers.reference import cosine

RELEVANCE_MIN = 0.75
CONSISTENCY_MIN = 0.75
DEFAULT_CANDIDATES = 10

ALIVE = "alive"
DEAD = "dead"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class LinkCandidate:
    hit: SearchHit
    relevance: float
    consistency: float
    accepted: bool


@dataclass(frozen=True)
class RelinkAudit:
    entry_id: str
    old_url: str | None
    new_url: str | None
    link_status_before: str
    link_status_after: str
    candidates: tuple[LinkCandidate, ...]


def probe_url(url: str, probe: UrlProbe) -> str:
    """Liveness of a syntactically valid http(s) URL: alive/dead/unknown."""
    parsed = urlparse(url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise ValueError(f"not a probeable URL: {url!r}")
    return probe.probe(url)


def build_link_query(entry: CatalogEntry, gazetteer: Gazetteer | None = None) -> str:
    """Concise deterministic query: name + category + place aliases +
    coverage years. Unparsed time and unresolved places contribute
    nothing rather than noise."""
    gazetteer = gazetteer or load_gazetteer()
    parts: list[str] = [entry.card.name, entry.card.category]
    if entry.geo.is_resolved():
        if entry.geo.level == GEO_GLOBAL:
            parts.append("global")
        else:
            scan = gazetteer.scan(entry.card.geographic_coverage_raw)
            parts.extend(scan.matched_aliases)
    if entry.time.is_parsed():
        parts.append(str(entry.time.start[0]))
        if entry.time.end is not None and entry.time.end[0] != entry.time.start[0]:
            parts.append(str(entry.time.end[0]))
    return " ".join(p for p in parts if p)


def _hit_text(hit: SearchHit) -> str:
    return f"{hit.title} {hit.snippet}".strip()


def relink(
    entry: CatalogEntry,
    search: SearchProvider,
    embed: EmbeddingProvider,
    probe: UrlProbe,
    relevance_min: float = RELEVANCE_MIN,
    consistency_min: float = CONSISTENCY_MIN,
    k: int = DEFAULT_CANDIDATES,
    gazetteer: Gazetteer | None = None,
) -> tuple[CatalogEntry, RelinkAudit | None]:
    """Attempt replacement for one entry; conservative by construction.

    Only entries with a dead original URL or no URL at all are eligible;
    a live (or unknown) original URL is never overwritten. Returns the
    possibly-updated entry and an audit record (None when the entry was
    not eligible). ProviderError propagates with the entry unchanged.
    """
    if entry.link_status == LINK_VERIFIED:
        return entry, None

    old_url = entry.card.url
    if old_url:
        try:
            liveness = probe_url(old_url, probe)
        except ValueError:
            liveness = DEAD  # unprobeable recorded URL: treat as rot
        if liveness in (ALIVE, UNKNOWN):
            return entry, None

    query = build_link_query(entry, gazetteer)
    hits = [h for h in search.web_search(query, k) if h.url]

    description = f"{query}. {entry.card.summary}".strip()
    context = " ".join(entry.evidence_contexts) or entry.card.summary

    candidates: list[LinkCandidate] = []
    if hits:
        vectors = embed.embed([description, context] + [_hit_text(h) or h.url for h in hits])
        desc_vec, ctx_vec = vectors[0], vectors[1]
        for hit, vec in zip(hits, vectors[2:]):
            candidates.append(
                LinkCandidate(
                    hit=hit,
                    relevance=cosine(desc_vec, vec),
                    consistency=cosine(ctx_vec, vec),
                    accepted=False,
                )
            )

    best: LinkCandidate | None = None
    for cand in candidates:
        if best is None or _cand_key(cand) > _cand_key(best):
            best = cand

    status_before = entry.link_status
    if best is not None and best.relevance >= relevance_min and best.consistency >= consistency_min:
        accepted = LinkCandidate(best.hit, best.relevance, best.consistency, True)
        candidates = [accepted if c.hit.rank == best.hit.rank else c for c in candidates]
        updated = replace(
            entry,
            card=replace(entry.card, url=best.hit.url),
            link_status=LINK_VERIFIED,
        )
    elif entry.link_status == LINK_ORIGINAL:
        # dead original, no confident replacement: fall back to the
        # literature reference
        updated = replace(entry, link_status=LINK_REFERENCE_ONLY)
    else:
        updated = entry

    audit = RelinkAudit(
        entry_id=entry.entry_id,
        old_url=old_url,
        new_url=updated.card.url if updated.link_status == LINK_VERIFIED else None,
        link_status_before=status_before,
        link_status_after=updated.link_status,
        candidates=tuple(candidates),
    )
    return updated, audit


def _cand_key(c: LinkCandidate) -> tuple[float, float, int]:
    return (min(c.relevance, c.consistency), c.relevance, -c.hit.rank)
