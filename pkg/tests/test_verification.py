from litmine.providers import ReferenceJudge
from litmine.schema import DataCard, EvidenceSpan
from litmine.verification import (
    NO_EVIDENCE,
    STATUS_EXACT,
    STATUS_FUZZY,
    STATUS_NOT_FOUND,
    SUPPORTED,
    UNSUPPORTED,
    localize_evidence,
    verify_card,
)

JUDGE = ReferenceJudge()

ARTICLE_TEXT = """<<TITLE>>
Walkability and relocation
<<END TITLE>>
<<SECTION Data>>
We use the Walk Score walkability scores provided by the data custodian. City-level walkability scores characterize the built environment for 1,609 US cities. The records cover March 2013 to February 2016. Coverage spans the USA at city level. The data are available at https://example.org/walk.
<<END SECTION>>
<<SECTION Methods>>
scores are on a scale of 1 to 100, where 100 is the most walkable and zero the least.
<<END SECTION>>
"""


def span(field, quote):
    return EvidenceSpan(field_name=field, quote=quote, claimed_location="Data")


def make_card(**overrides):
    base = dict(
        dataset_id="ds-01",
        name="Walk Score walkability scores",
        summary="City-level walkability scores characterize the built environment for 1,609 US cities.",
        category="Statistical infrastructure data",
        time_coverage_raw="March 2013 to February 2016",
        geographic_coverage_raw="USA",
        url="https://example.org/walk",
        evidence=(
            span("name", "We use the Walk Score walkability scores"),
            span("summary", "City-level walkability scores characterize the built environment for 1,609 US cities."),
            span("time", "The records cover March 2013 to February 2016."),
            span("geo", "Coverage spans the USA at city level."),
            span("url", "The data are available at https://example.org/walk."),
        ),
    )
    base.update(overrides)
    return DataCard(**base)


def test_localize_exact():
    loc = localize_evidence(span("time", "records cover March 2013"), ARTICLE_TEXT)
    assert loc.status == STATUS_EXACT
    assert loc.similarity == 1.0
    assert ARTICLE_TEXT[loc.offset : loc.end].lower() == "records cover march 2013"


def test_localize_fuzzy_tolerates_punctuation_drift():
    loc = localize_evidence(
        span("summary", "Scores are on a scale of 1 to 100 where 100 is the most walkable."),
        ARTICLE_TEXT,
    )
    assert loc.status == STATUS_FUZZY
    assert loc.similarity >= 0.85


def test_localize_absent_quote():
    loc = localize_evidence(span("geo", "completely fabricated sentence about glaciers"), ARTICLE_TEXT)
    assert loc.status == STATUS_NOT_FOUND
    assert loc.offset is None


def test_verify_supported_card():
    verified = verify_card(make_card(), ARTICLE_TEXT, JUDGE)
    assert verified.retained
    assert verified.field_verdicts["name"] == SUPPORTED
    assert verified.field_verdicts["summary"] == SUPPORTED
    assert verified.field_verdicts["time"] == SUPPORTED
    assert verified.field_verdicts["geo"] == SUPPORTED
    assert verified.field_verdicts["url"] == SUPPORTED
    # category carries no evidence span
    assert verified.field_verdicts["category"] == NO_EVIDENCE
    assert verified.evidence_contexts  # feeds link consistency scoring


def test_hallucinated_geo_is_filtered_field_level():
    card = make_card(
        geographic_coverage_raw="Global",
        evidence=make_card().evidence[:3]
        + (span("geo", "Coverage spans the USA at city level."),),
    )
    verified = verify_card(card, ARTICLE_TEXT, JUDGE)
    assert verified.field_verdicts["geo"] == UNSUPPORTED
    assert verified.retained  # geo is not a required field
    assert verified.card.geographic_coverage_raw == ""  # value cleared
    # untouched fields keep their values
    assert verified.card.time_coverage_raw == "March 2013 to February 2016"


def test_fabricated_evidence_marks_field_unsupported():
    card = make_card(
        time_coverage_raw="1875 to 1880",
        evidence=(
            span("name", "We use the Walk Score walkability scores"),
            span("summary", "City-level walkability scores characterize the built environment for 1,609 US cities."),
            span("time", "This exact sentence exists nowhere in the article."),
        ),
    )
    verified = verify_card(card, ARTICLE_TEXT, JUDGE)
    assert verified.field_verdicts["time"] == UNSUPPORTED
    assert verified.card.time_coverage_raw == ""
    assert verified.retained


def test_all_evidence_not_found_drops_card():
    card = make_card(
        evidence=(
            span("name", "nothing like this appears"),
            span("summary", "nor does this fabricated support"),
        ),
    )
    verified = verify_card(card, ARTICLE_TEXT, JUDGE)
    assert not verified.retained


def test_card_without_any_evidence_is_not_retained():
    verified = verify_card(make_card(evidence=()), ARTICLE_TEXT, JUDGE)
    assert not verified.retained
    assert all(v == NO_EVIDENCE for v in verified.field_verdicts.values())


def test_unsupported_required_field_drops_card():
    card = make_card(
        name="Entirely different satellite product",
        evidence=(span("name", "This fabricated name support is absent."),)
        + make_card().evidence[1:],
    )
    verified = verify_card(card, ARTICLE_TEXT, JUDGE)
    assert verified.field_verdicts["name"] == UNSUPPORTED
    assert not verified.retained


def test_verification_is_monotone_never_edits_values():
    card = make_card(geographic_coverage_raw="Global")
    verified = verify_card(card, ARTICLE_TEXT, JUDGE)
    for attr in ("name", "summary", "category", "time_coverage_raw", "url"):
        assert getattr(verified.card, attr) in (getattr(card, attr), "", None)
    # geo was cleared, not rewritten
    assert verified.card.geographic_coverage_raw in ("", card.geographic_coverage_raw)


def test_whitespace_padding_preserves_statuses():
    padded = ARTICLE_TEXT.replace(" ", "  ").replace("\n", "\n\n")
    base = verify_card(make_card(), ARTICLE_TEXT, JUDGE)
    moved = verify_card(make_card(), padded, JUDGE)
    assert base.field_verdicts == moved.field_verdicts
    base_statuses = [loc.status for loc in base.localizations]
    moved_statuses = [loc.status for loc in moved.localizations]
    assert base_statuses == moved_statuses


def test_retained_card_has_supported_located_field():
    verified = verify_card(make_card(), ARTICLE_TEXT, JUDGE)
    located_fields = {
        loc.span.field_name for loc in verified.localizations if loc.located()
    }
    assert any(
        verdict == SUPPORTED and field in located_fields
        for field, verdict in verified.field_verdicts.items()
    )
