"""Data-card schema and the fixed urban-data taxonomy.

A data card is the unit record of the whole pipeline: one dataset
mention, described by name, summary, category labels, free-text time and
geographic coverage, access URL, citations, and the verbatim evidence
spans that back the fields up.
"""

from dataclasses import dataclass, replace

from litmine import textmatch
from litmine.textutil import normalize_label

TAXONOMY_VERSION = "1"

CONFIDENCE_LABELS = ("high", "medium", "low")

# card fields that evidence spans / verdicts refer to
FIELD_NAME = "name"
FIELD_SUMMARY = "summary"
FIELD_CATEGORY = "category"
FIELD_SUB_CATEGORY = "sub_category"
FIELD_TIME = "time"
FIELD_GEO = "geo"
FIELD_URL = "url"
FIELD_REFERENCES = "references"

CARD_FIELDS = (
    FIELD_NAME,
    FIELD_SUMMARY,
    FIELD_CATEGORY,
    FIELD_SUB_CATEGORY,
    FIELD_TIME,
    FIELD_GEO,
    FIELD_URL,
    FIELD_REFERENCES,
)

REQUIRED_FIELDS = (FIELD_NAME, FIELD_SUMMARY, FIELD_CATEGORY)


@dataclass(frozen=True)
class EvidenceSpan:
    """A verbatim quote backing one card field."""

    field_name: str
    quote: str
    claimed_location: str = ""
    confidence_label: str = "medium"

    def __post_init__(self):
        if not self.quote:
            raise ValueError("evidence quote must be non-empty")


@dataclass(frozen=True)
class DataCard:
    dataset_id: str
    name: str
    summary: str
    category: str
    sub_category: str | None = None
    time_coverage_raw: str = ""
    geographic_coverage_raw: str = ""
    url: str | None = None
    references: tuple[str, ...] = ()
    evidence: tuple[EvidenceSpan, ...] = ()
    other_information: str | None = None

    def has_access_info(self) -> bool:
        return bool(self.url) or bool(self.references)


@dataclass(frozen=True)
class Category:
    name: str
    subcategories: tuple[str, ...]


@dataclass(frozen=True)
class Taxonomy:
    version: str
    categories: tuple[Category, ...]

    def category_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.categories)

    def subcategory_names(self) -> tuple[str, ...]:
        return tuple(s for c in self.categories for s in c.subcategories)

    def find_category(self, label: str) -> Category | None:
        wanted = normalize_label(label)
        for cat in self.categories:
            if normalize_label(cat.name) == wanted:
                return cat
        return None

    def category_of_subcategory(self, label: str) -> Category | None:
        wanted = normalize_label(label)
        for cat in self.categories:
            for sub in cat.subcategories:
                if normalize_label(sub) == wanted:
                    return cat
        return None


_TAXONOMY = Taxonomy(
    version=TAXONOMY_VERSION,
    categories=(
        Category(
            "Statistical infrastructure data",
            (
                "Road networks and transportation infrastructure",
                "Building footprints and land-use maps",
                "Points of interest (POIs)",
                "Administrative boundaries and zoning maps",
                "Utility networks (electricity, water, and communication)",
            ),
        ),
        Category(
            "Human behavior data",
            (
                "Human mobility traces (GPS, transit cards, ride-hailing)",
                "Socioeconomic activities (consumption, employment, and commerce)",
                "Social media interactions and online behavior",
                "Health and wellbeing data (hospitalization counts and survey-based measures)",
            ),
        ),
        Category(
            "Policy and survey data",
            (
                "Population censuses and household surveys",
                "Statistical yearbooks and socioeconomic indicators",
                "Government reports and urban planning documents",
                "Policy texts and regulatory frameworks",
            ),
        ),
        Category(
            "Multimodal sensing data",
            (
                "Satellite remote sensing imagery (optical, SAR, night-time lights)",
                "Aerial and drone imagery",
                "Ground-based sensors (air quality, temperature, and noise)",
                "Urban IoT devices (traffic, energy, water, environmental monitoring)",
                "City-wide camera networks and meteorological stations",
            ),
        ),
    ),
)


def canonical_taxonomy() -> Taxonomy:
    """The built-in four-category / eighteen-subcategory taxonomy."""
    return _TAXONOMY


@dataclass(frozen=True)
class Violation:
    code: str
    field_name: str
    message: str


def validate_card(card: DataCard, taxonomy: Taxonomy) -> list[Violation]:
    """Check a card against the schema and taxonomy.

    Returns every violation found (empty list means the card is valid).
    Label comparison is case- and punctuation-insensitive; labels not in
    the taxonomy are violations regardless of how close they look —
    near-miss repair is harmonization's job, not validation's.
    """
    out: list[Violation] = []
    if not card.name.strip():
        out.append(Violation("empty_field", FIELD_NAME, "name must be non-empty"))
    if not card.summary.strip():
        out.append(Violation("empty_field", FIELD_SUMMARY, "summary must be non-empty"))

    cat = taxonomy.find_category(card.category) if card.category else None
    if cat is None:
        out.append(
            Violation(
                "unknown_category",
                FIELD_CATEGORY,
                f"category {card.category!r} is not a taxonomy category",
            )
        )
    if card.sub_category:
        owner = taxonomy.category_of_subcategory(card.sub_category)
        if owner is None:
            out.append(
                Violation(
                    "unknown_subcategory",
                    FIELD_SUB_CATEGORY,
                    f"sub-category {card.sub_category!r} is not in the taxonomy",
                )
            )
        elif cat is not None and owner.name != cat.name:
            out.append(
                Violation(
                    "subcategory_mismatch",
                    FIELD_SUB_CATEGORY,
                    f"sub-category {card.sub_category!r} belongs to "
                    f"{owner.name!r}, not {card.category!r}",
                )
            )
    return out


def canonicalize_category(label: str, taxonomy: Taxonomy, min_similarity: float = 0.85) -> str | None:
    """Map a free-form category label to its canonical taxonomy name.

    Exact normalized match first; otherwise the closest category by edit
    similarity on normalized labels, accepted at `min_similarity` so
    provider spelling slips still resolve. None when nothing is close.
    """
    return _canonicalize(label, taxonomy.category_names(), min_similarity)


def canonicalize_subcategory(label: str, taxonomy: Taxonomy, min_similarity: float = 0.85) -> str | None:
    return _canonicalize(label, taxonomy.subcategory_names(), min_similarity)


def _canonicalize(label: str, names: tuple[str, ...], min_similarity: float) -> str | None:
    wanted = normalize_label(label)
    if not wanted:
        return None
    best_name = None
    best_sim = 0.0
    for name in names:
        norm = normalize_label(name)
        if norm == wanted:
            return name
        sim = textmatch.similarity(wanted, norm)
        if sim > best_sim:
            best_sim = sim
            best_name = name
    if best_name is not None and best_sim >= min_similarity:
        return best_name
    return None


class CardParseError(ValueError):
    """Raised when a card record cannot be turned into a DataCard."""


_RECORD_KEYS = {
    "dataset_id": "dataset_id",
    "Data_Name": "name",
    "Data_summary": "summary",
    "Category": "category",
    "Sub-category": "sub_category",
    "Time_Coverage": "time_coverage_raw",
    "Geographic_Coverage": "geographic_coverage_raw",
    "URL": "url",
    "ref": "references",
    "Other_Information": "other_information",
}


def card_to_record(card: DataCard) -> dict:
    """Serialize to the interchange record shape (the same key set the
    extraction prompt asks providers for)."""
    return {
        "dataset_id": card.dataset_id,
        "Data_Name": card.name,
        "Data_summary": card.summary,
        "Category": card.category,
        "Sub-category": card.sub_category or "",
        "Time_Coverage": card.time_coverage_raw,
        "Geographic_Coverage": card.geographic_coverage_raw,
        "URL": card.url or "",
        "ref": list(card.references),
        "Other_Information": card.other_information or "",
        "evidence": [
            {
                "field": span.field_name,
                "quote": span.quote,
                "location": span.claimed_location,
                "confidence": span.confidence_label,
            }
            for span in card.evidence
        ],
    }


def card_from_record(obj: dict, fallback_id: str = "") -> DataCard:
    """Parse one interchange record into a DataCard.

    Tolerates missing optional keys and consolidated evidence notes
    packed into Other_Information; raises CardParseError when the record
    is not a dict or has no usable Data_Name.
    """
    if not isinstance(obj, dict):
        raise CardParseError(f"card record must be an object, got {type(obj).__name__}")
    name = str(obj.get("Data_Name") or "").strip()
    if not name:
        raise CardParseError("card record has no Data_Name")

    refs = obj.get("ref") or []
    if isinstance(refs, str):
        refs = [refs]
    refs = tuple(str(r).strip() for r in refs if str(r).strip())

    other = str(obj.get("Other_Information") or "").strip() or None

    spans: list[EvidenceSpan] = []
    for item in obj.get("evidence") or []:
        if not isinstance(item, dict):
            continue
        quote = str(item.get("quote") or "").strip()
        if not quote:
            continue
        spans.append(
            EvidenceSpan(
                field_name=_canonical_field(str(item.get("field") or FIELD_SUMMARY)),
                quote=quote,
                claimed_location=str(item.get("location") or "").strip(),
                confidence_label=_canonical_confidence(str(item.get("confidence") or "")),
            )
        )
    if other:
        consolidated = _parse_consolidated_evidence(other)
        if consolidated is not None and not any(
            s.field_name == consolidated.field_name and s.quote == consolidated.quote
            for s in spans
        ):
            spans.append(consolidated)

    return DataCard(
        dataset_id=str(obj.get("dataset_id") or fallback_id or "ds-01"),
        name=name,
        summary=str(obj.get("Data_summary") or "").strip(),
        category=str(obj.get("Category") or "").strip(),
        sub_category=str(obj.get("Sub-category") or "").strip() or None,
        time_coverage_raw=str(obj.get("Time_Coverage") or "").strip(),
        geographic_coverage_raw=str(obj.get("Geographic_Coverage") or "").strip(),
        url=str(obj.get("URL") or "").strip() or None,
        references=refs,
        evidence=tuple(spans),
        other_information=other,
    )


def _canonical_field(raw: str) -> str:
    alias = normalize_label(raw)
    mapping = {
        "name": FIELD_NAME,
        "data name": FIELD_NAME,
        "summary": FIELD_SUMMARY,
        "data summary": FIELD_SUMMARY,
        "category": FIELD_CATEGORY,
        "sub category": FIELD_SUB_CATEGORY,
        "subcategory": FIELD_SUB_CATEGORY,
        "time": FIELD_TIME,
        "time coverage": FIELD_TIME,
        "geo": FIELD_GEO,
        "geographic coverage": FIELD_GEO,
        "url": FIELD_URL,
        "ref": FIELD_REFERENCES,
        "refs": FIELD_REFERENCES,
        "references": FIELD_REFERENCES,
        "card": FIELD_SUMMARY,
    }
    return mapping.get(alias, FIELD_SUMMARY)


def _canonical_confidence(raw: str) -> str:
    label = raw.strip().lower()
    return label if label in CONFIDENCE_LABELS else "medium"


def _parse_consolidated_evidence(other_information: str) -> EvidenceSpan | None:
    """Parse 'Evidence: ...; Location: ...; Confidence: ...' notes."""
    text = other_information
    low = text.lower()
    start = low.find("evidence:")
    if start == -1:
        return None
    rest = text[start + len("evidence:") :]
    quote, location, confidence = rest, "", ""
    low_rest = rest.lower()
    loc_idx = low_rest.find("location:")
    if loc_idx != -1:
        quote = rest[:loc_idx]
        tail = rest[loc_idx + len("location:") :]
        conf_idx = tail.lower().find("confidence:")
        if conf_idx != -1:
            location = tail[:conf_idx]
            confidence = tail[conf_idx + len("confidence:") :]
        else:
            location = tail
    quote = quote.strip().strip(";").strip()
    if not quote:
        return None
    return EvidenceSpan(
        field_name=FIELD_SUMMARY,
        quote=quote,
        claimed_location=location.strip().strip(";").strip(),
        confidence_label=_canonical_confidence(confidence.strip().strip(";")),
    )


def clear_field(card: DataCard, field_name: str) -> DataCard:
    """Return a copy with one field's value removed (filtering)."""
    if field_name == FIELD_SUB_CATEGORY:
        return replace(card, sub_category=None)
    if field_name == FIELD_TIME:
        return replace(card, time_coverage_raw="")
    if field_name == FIELD_GEO:
        return replace(card, geographic_coverage_raw="")
    if field_name == FIELD_URL:
        return replace(card, url=None)
    if field_name == FIELD_REFERENCES:
        return replace(card, references=())
    return card
