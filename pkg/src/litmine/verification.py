"""Evidence-aware verification of extracted cards.

Two steps per card: locate every claimed evidence quote in the
flattened article text (exact, then fuzzy windows), then ask the judge
whether each field value is actually entailed by the text around its
located evidence. Field verdicts:

  supported    located evidence entails the value
  unsupported  evidence located but the value is not entailed, or the
               claimed evidence cannot be found in the article at all
  no_evidence  the extractor provided no evidence for the field

Verification only marks and removes, it never edits values. A card is
retained only if no required field (name, summary, category) is
unsupported and at least one field is supported by located evidence;
unsupported optional field values are cleared from the retained card.
"""

from dataclasses import dataclass

from litmine import textmatch
from litmine.providers.base import JudgeProvider
from litmine.schema import (
    DataCard,
    EvidenceSpan,
    FIELD_CATEGORY,
    FIELD_GEO,
    FIELD_NAME,
    FIELD_REFERENCES,
    FIELD_SUB_CATEGORY,
    FIELD_SUMMARY,
    FIELD_TIME,
    FIELD_URL,
    REQUIRED_FIELDS,
    clear_field,
)

SUPPORTED = "supported"
UNSUPPORTED = "unsupported"
NO_EVIDENCE = "no_evidence"

CONTEXT_WINDOW = 500  # chars either side of a located quote

STATUS_EXACT = textmatch.EXACT
STATUS_FUZZY = textmatch.FUZZY
STATUS_NOT_FOUND = textmatch.NOT_FOUND


@dataclass(frozen=True)
class LocalizationResult:
    span: EvidenceSpan
    status: str
    offset: int | None
    end: int | None
    similarity: float

    def located(self) -> bool:
        return self.status in (STATUS_EXACT, STATUS_FUZZY)


@dataclass(frozen=True)
class VerifiedCard:
    card: DataCard  # filtered: unsupported optional values cleared
    field_verdicts: dict[str, str]
    retained: bool
    localizations: tuple[LocalizationResult, ...]
    evidence_contexts: tuple[str, ...]


def localize_evidence(
    span: EvidenceSpan, article_text: str, threshold: float = textmatch.FUZZY_THRESHOLD
) -> LocalizationResult:
    """Find one evidence quote in the article text."""
    match = textmatch.locate(span.quote, article_text, threshold=threshold)
    return LocalizationResult(
        span=span,
        status=match.status,
        offset=match.offset,
        end=match.end,
        similarity=match.similarity,
    )


def _context(article_text: str, loc: LocalizationResult) -> str:
    start = max(0, (loc.offset or 0) - CONTEXT_WINDOW)
    end = min(len(article_text), (loc.end or 0) + CONTEXT_WINDOW)
    return article_text[start:end]


def _field_values(card: DataCard) -> dict[str, str]:
    values = {
        FIELD_NAME: card.name,
        FIELD_SUMMARY: card.summary,
        FIELD_CATEGORY: card.category,
    }
    if card.sub_category:
        values[FIELD_SUB_CATEGORY] = card.sub_category
    if card.time_coverage_raw:
        values[FIELD_TIME] = card.time_coverage_raw
    if card.geographic_coverage_raw:
        values[FIELD_GEO] = card.geographic_coverage_raw
    if card.url:
        values[FIELD_URL] = card.url
    if card.references:
        values[FIELD_REFERENCES] = "; ".join(card.references)
    return values


def verify_semantics(
    card: DataCard,
    localized: list[LocalizationResult],
    article_text: str,
    judge: JudgeProvider,
) -> VerifiedCard:
    """Combine localization results into per-field verdicts and the
    retain/drop decision. ProviderError from the judge propagates; the
    caller may retry the card later."""
    by_field: dict[str, list[LocalizationResult]] = {}
    for loc in localized:
        by_field.setdefault(loc.span.field_name, []).append(loc)

    values = _field_values(card)
    verdicts: dict[str, str] = {}
    located_texts: list[str] = []

    for field_name, value in values.items():
        locs = by_field.get(field_name, [])
        if not locs:
            verdicts[field_name] = NO_EVIDENCE
            continue
        located = [loc for loc in locs if loc.located()]
        if not located:
            # claimed evidence is nowhere in the article: treat the
            # field as failing localization, not as merely unevidenced
            verdicts[field_name] = UNSUPPORTED
            continue
        entailed = False
        for loc in located:
            if judge.field_supported(field_name, value, _context(article_text, loc)):
                entailed = True
                break
        if entailed:
            # the located article text itself (not the judge window) is
            # what downstream linking compares candidates against
            located_texts.extend(
                article_text[loc.offset : loc.end] for loc in located
            )
        verdicts[field_name] = SUPPORTED if entailed else UNSUPPORTED

    required_failed = any(verdicts.get(f) == UNSUPPORTED for f in REQUIRED_FIELDS)
    any_supported = any(v == SUPPORTED for v in verdicts.values())
    retained = not required_failed and any_supported

    filtered = card
    for field_name, verdict in verdicts.items():
        if verdict == UNSUPPORTED and field_name not in REQUIRED_FIELDS:
            filtered = clear_field(filtered, field_name)

    return VerifiedCard(
        card=filtered,
        field_verdicts=verdicts,
        retained=retained,
        localizations=tuple(localized),
        evidence_contexts=tuple(dict.fromkeys(located_texts)),
    )


def verify_card(
    card: DataCard,
    article_text: str,
    judge: JudgeProvider,
    threshold: float = textmatch.FUZZY_THRESHOLD,
) -> VerifiedCard:
    """Localize all evidence spans, then run the semantic checks."""
    localized = [localize_evidence(span, article_text, threshold) for span in card.evidence]
    return verify_semantics(card, localized, article_text, judge)
