"""Normalization of verified cards into canonical catalog entries.

Four passes: temporal normalization (free text -> year / year-month
ranges), geographic normalization (mentions -> ISO country codes via
the gazetteer), category validation with near-miss label repair, and
reference checking. Cards that fail category validation or are weakly
supported (no reference, no URL, unparseable time, unresolved place)
are rejected; rejections are data, logged with reasons, never raised.
"""

import hashlib
import re
from dataclasses import dataclass, replace
from typing import Callable

from litmine.gazetteer import Gazetteer
from litmine.schema import (
    DataCard,
    Taxonomy,
    canonical_taxonomy,
    canonicalize_category,
    canonicalize_subcategory,
)
from litmine.textutil import YEAR_RE, normalize_label

LINK_VERIFIED = "verified_url"
LINK_ORIGINAL = "original_url"
LINK_REFERENCE_ONLY = "reference_only"

REF_VALID = "valid"
REF_MALFORMED = "malformed"
REF_MISSING = "missing"


@dataclass(frozen=True)
class TimeRange:
    """Parsed temporal coverage.

    start/end are (year, month) pairs with month possibly None. An
    open-ended range has a start and no end. When parsing failed,
    `unparsed` holds the original text and both endpoints are None.
    """

    start: tuple[int, int | None] | None = None
    end: tuple[int, int | None] | None = None
    open_ended: bool = False
    unparsed: str | None = None

    def is_parsed(self) -> bool:
        return self.unparsed is None and self.start is not None

    def midpoint_year(self) -> float | None:
        if not self.is_parsed():
            return None
        if self.end is None:
            return float(self.start[0])
        return (self.start[0] + self.end[0]) / 2

    def overlaps_years(self, year_from: int | None, year_to: int | None) -> bool:
        if not self.is_parsed():
            return False
        lo = self.start[0]
        hi = self.end[0] if self.end is not None else 2199 if self.open_ended else lo
        if year_from is not None and hi < year_from:
            return False
        if year_to is not None and lo > year_to:
            return False
        return True


GEO_GLOBAL = "global"
GEO_COUNTRY = "country"
GEO_SUBNATIONAL = "subnational"


@dataclass(frozen=True)
class GeoScope:
    level: str = GEO_COUNTRY
    country_codes: tuple[str, ...] = ()
    region_text: str | None = None
    unresolved: str | None = None

    def is_resolved(self) -> bool:
        return self.unresolved is None


@dataclass(frozen=True)
class ArticleSource:
    article_id: str
    title: str
    journal: str = ""
    publication_year: int | None = None


@dataclass(frozen=True)
class CatalogEntry:
    entry_id: str
    card: DataCard
    time: TimeRange
    geo: GeoScope
    source: ArticleSource
    link_status: str
    reference_status: str
    evidence_contexts: tuple[str, ...] = ()

    def no_access_info(self) -> bool:
        """Flagged (not dropped): neither a URL nor any reference."""
        return not self.card.has_access_info()


@dataclass(frozen=True)
class Rejection:
    article_id: str
    dataset_id: str
    reason: str  # "category" | "weak support"
    detail: str


_MONTHS = {
    name: i + 1
    for i, names in enumerate(
        [
            ("january", "jan"),
            ("february", "feb"),
            ("march", "mar"),
            ("april", "apr"),
            ("may",),
            ("june", "jun"),
            ("july", "jul"),
            ("august", "aug"),
            ("september", "sep", "sept"),
            ("october", "oct"),
            ("november", "nov"),
            ("december", "dec"),
        ]
    )
    for name in names
}

_MONTH_PAT = r"(?:" + "|".join(sorted(_MONTHS, key=len, reverse=True)) + r")\.?"
_YEAR_PAT = r"(?<!\d)(?<!\d,)(?:1[5-9]\d{2}|2[01]\d{2})(?!,?\d)"
_DASH = r"(?:–|—|−|-|to|through|until|till)"

_RE_MY_RANGE = re.compile(
    rf"({_MONTH_PAT})\s+({_YEAR_PAT})\s*{_DASH}\s*({_MONTH_PAT})\s+({_YEAR_PAT})",
    re.IGNORECASE,
)
_RE_NUM_MY_RANGE = re.compile(
    rf"({_YEAR_PAT})-(0[1-9]|1[0-2])\s*(?:–|—|−|to|through|until|till|/)\s*({_YEAR_PAT})-(0[1-9]|1[0-2])",
    re.IGNORECASE,
)
_RE_OPEN = re.compile(
    rf"(?:\b(?:since|from)\s+({_YEAR_PAT})(?:\s+(?:onwards?|onward))?\b(?!\s*{_DASH})"
    rf"|({_YEAR_PAT})\s*(?:–|—|−|-|to)\s*(?:present|now|ongoing|today|current)\b)",
    re.IGNORECASE,
)
_RE_YEAR_RANGE = re.compile(rf"({_YEAR_PAT})\s*{_DASH}\s*({_YEAR_PAT})", re.IGNORECASE)
_RE_BETWEEN = re.compile(rf"between\s+({_YEAR_PAT})\s+and\s+({_YEAR_PAT})", re.IGNORECASE)
_RE_MY_SINGLE = re.compile(rf"({_MONTH_PAT})\s+({_YEAR_PAT})", re.IGNORECASE)
_RE_NUM_MY_SINGLE = re.compile(rf"({_YEAR_PAT})-(0[1-9]|1[0-2])(?!\d)", re.IGNORECASE)


def _month(token: str) -> int:
    return _MONTHS[token.rstrip(".").lower()]


def normalize_time(raw: str) -> TimeRange:
    """Parse free-text temporal coverage; never raises.

    Grammar, first match wins (patterns may be embedded in longer text):
      1. month-year range      "March 2013 to February 2016"
      2. numeric y-m range     "2013-03 to 2016-02"
      3. open-ended            "since 2015", "2019-present"
      4. year range            "2007-2018", "between 2007 and 2018"
      5. single month-year     "March 2013", "2013-03"
      6. standalone years      one -> that year; several -> min..max
    Anything else (or a reversed range) is information-preservingly
    returned as unparsed.
    """
    text = (raw or "").strip()
    if not text:
        return TimeRange(unparsed=raw or "")

    m = _RE_MY_RANGE.search(text)
    if m:
        start = (int(m.group(2)), _month(m.group(1)))
        end = (int(m.group(4)), _month(m.group(3)))
        return _ordered(start, end, raw)
    m = _RE_NUM_MY_RANGE.search(text)
    if m:
        start = (int(m.group(1)), int(m.group(2)))
        end = (int(m.group(3)), int(m.group(4)))
        return _ordered(start, end, raw)
    m = _RE_OPEN.search(text)
    if m:
        year = int(m.group(1) or m.group(2))
        return TimeRange(start=(year, None), end=None, open_ended=True)
    m = _RE_BETWEEN.search(text) or _RE_YEAR_RANGE.search(text)
    if m:
        start = (int(m.group(1)), None)
        end = (int(m.group(2)), None)
        return _ordered(start, end, raw)
    m = _RE_MY_SINGLE.search(text)
    if m:
        point = (int(m.group(2)), _month(m.group(1)))
        return TimeRange(start=point, end=point)
    m = _RE_NUM_MY_SINGLE.search(text)
    if m:
        point = (int(m.group(1)), int(m.group(2)))
        return TimeRange(start=point, end=point)
    years = [int(y) for y in YEAR_RE.findall(text)]
    if len(years) == 1:
        point = (years[0], None)
        return TimeRange(start=point, end=point)
    if len(years) > 1:
        return TimeRange(start=(min(years), None), end=(max(years), None))
    return TimeRange(unparsed=raw)


def _ordered(start: tuple[int, int | None], end: tuple[int, int | None], raw: str) -> TimeRange:
    key = lambda p: (p[0], p[1] or 0)
    if key(start) > key(end):
        return TimeRange(unparsed=raw)  # reversed range: keep the text
    return TimeRange(start=start, end=end)


def normalize_geo(raw: str, gazetteer: Gazetteer) -> GeoScope:
    """Map a free-text place description onto country codes.

    Global cues win; otherwise any resolved countries (city mentions
    count for their country and mark the scope subnational, as do
    city/region/district style words). No resolution -> unresolved with
    the original text preserved.
    """
    text = (raw or "").strip()
    if not text:
        return GeoScope(unresolved=raw or "")
    scan = gazetteer.scan(text)
    if scan.global_hit:
        return GeoScope(level=GEO_GLOBAL, country_codes=())
    if scan.country_codes:
        if scan.subnational_hit:
            return GeoScope(
                level=GEO_SUBNATIONAL,
                country_codes=scan.country_codes,
                region_text=raw,
            )
        return GeoScope(level=GEO_COUNTRY, country_codes=scan.country_codes)
    return GeoScope(unresolved=raw)


_URL_IN_REF = re.compile(r"(https?://\S+|www\.\S+|\b[a-z0-9-]+\.(?:com|org|net|gov|edu|io)\b)", re.IGNORECASE)


def check_references(card: DataCard) -> str:
    """valid / malformed / missing.

    A reference string counts as citation-shaped when it carries a URL,
    or a year plus enough text to name authors and a venue.
    """
    if not card.references:
        return REF_MISSING
    for ref in card.references:
        if _URL_IN_REF.search(ref):
            return REF_VALID
        if YEAR_RE.search(ref) and len(normalize_label(ref).split()) >= 4:
            return REF_VALID
    return REF_MALFORMED


def entry_id_for(article_id: str, dataset_id: str) -> str:
    digest = hashlib.sha256(f"{article_id}:{dataset_id}".encode("utf-8")).hexdigest()
    return digest[:16]


def harmonize(
    card: DataCard,
    source: ArticleSource,
    gazetteer: Gazetteer,
    taxonomy: Taxonomy | None = None,
    evidence_contexts: tuple[str, ...] = (),
    cross_validate: Callable[[DataCard, TimeRange, GeoScope], set[str]] | None = None,
) -> CatalogEntry | Rejection:
    """Normalize one verified card into a CatalogEntry, or reject it.

    Rejection reasons: "category" (label cannot be mapped into the
    taxonomy) and "weak support" (no valid reference AND no URL AND
    unparseable time AND unresolved place). `cross_validate`, when
    supplied, may veto the time/geo normalizations (vetoed values fall
    back to unparsed/unresolved); the offline profile leaves it off.
    """
    taxonomy = taxonomy or canonical_taxonomy()

    category = canonicalize_category(card.category, taxonomy)
    if category is None:
        return Rejection(
            article_id=source.article_id,
            dataset_id=card.dataset_id,
            reason="category",
            detail=f"category label {card.category!r} is not in the taxonomy",
        )
    sub = canonicalize_subcategory(card.sub_category, taxonomy) if card.sub_category else None
    if sub is not None:
        owner = taxonomy.category_of_subcategory(sub)
        if owner is None or owner.name != category:
            sub = None  # cross-category pairing: drop the sub-label, keep the card

    time = normalize_time(card.time_coverage_raw)
    geo = normalize_geo(card.geographic_coverage_raw, gazetteer)
    if cross_validate is not None:
        vetoes = cross_validate(card, time, geo)
        if "time" in vetoes:
            time = TimeRange(unparsed=card.time_coverage_raw)
        if "geo" in vetoes:
            geo = GeoScope(unresolved=card.geographic_coverage_raw)

    ref_status = check_references(card)
    if (
        ref_status == REF_MISSING
        and not card.url
        and not time.is_parsed()
        and not geo.is_resolved()
    ):
        return Rejection(
            article_id=source.article_id,
            dataset_id=card.dataset_id,
            reason="weak support",
            detail="no reference, no URL, unparseable time, unresolved place",
        )

    normalized_card = replace(card, category=category, sub_category=sub)
    return CatalogEntry(
        entry_id=entry_id_for(source.article_id, card.dataset_id),
        card=normalized_card,
        time=time,
        geo=geo,
        source=source,
        link_status=LINK_ORIGINAL if card.url else LINK_REFERENCE_ONLY,
        reference_status=ref_status,
        evidence_contexts=evidence_contexts,
    )
