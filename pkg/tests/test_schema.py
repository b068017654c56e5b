import pytest

from litmine.schema import (
    CardParseError,
    DataCard,
    EvidenceSpan,
    canonical_taxonomy,
    canonicalize_category,
    canonicalize_subcategory,
    card_from_record,
    card_to_record,
    validate_card,
)


def make_card(**overrides) -> DataCard:
    base = dict(
        dataset_id="ds-01",
        name="Walk Score walkability scores",
        summary="City-level walkability scores for US cities.",
        category="Human behavior data",
        sub_category="Human mobility traces (GPS, transit cards, ride-hailing)",
    )
    base.update(overrides)
    return DataCard(**base)


def test_taxonomy_has_four_categories():
    assert len(canonical_taxonomy().categories) == 4


def test_taxonomy_has_eighteen_subcategories():
    # 5 + 4 + 4 + 5
    tax = canonical_taxonomy()
    assert [len(c.subcategories) for c in tax.categories] == [5, 4, 4, 5]
    assert len(tax.subcategory_names()) == 18


def test_category_names_fixed():
    assert canonical_taxonomy().category_names() == (
        "Statistical infrastructure data",
        "Human behavior data",
        "Policy and survey data",
        "Multimodal sensing data",
    )


def test_policy_and_survey_subcategories():
    cat = canonical_taxonomy().find_category("Policy and survey data")
    assert len(cat.subcategories) == 4
    assert cat.subcategories[0].lower().startswith("population censuses and household surveys")


def test_validate_ok_card():
    assert validate_card(make_card(), canonical_taxonomy()) == []


def test_validate_cross_category_subcategory():
    card = make_card(sub_category="Aerial and drone imagery")
    violations = validate_card(card, canonical_taxonomy())
    assert [v.code for v in violations] == ["subcategory_mismatch"]


def test_validate_empty_name():
    card = make_card(name="  ")
    codes = [v.code for v in validate_card(card, canonical_taxonomy())]
    assert "empty_field" in codes


def test_validate_reports_all_violations():
    card = make_card(name="", category="Not a category", sub_category="Neither")
    codes = sorted(v.code for v in validate_card(card, canonical_taxonomy()))
    assert codes == ["empty_field", "unknown_category", "unknown_subcategory"]


def test_label_matching_is_case_and_punctuation_insensitive():
    card = make_card(
        category="human behavior DATA",
        sub_category="human mobility traces gps transit cards ride hailing",
    )
    assert validate_card(card, canonical_taxonomy()) == []


def test_canonicalize_repairs_spelling_slip():
    tax = canonical_taxonomy()
    assert canonicalize_category("Statical Infrastructure Data", tax) == (
        "Statistical infrastructure data"
    )
    assert canonicalize_category("completely different words", tax) is None


def test_canonicalize_subcategory_exact_and_none():
    tax = canonical_taxonomy()
    assert canonicalize_subcategory("aerial and drone imagery", tax) == "Aerial and drone imagery"
    assert canonicalize_subcategory("quantum flux sensors", tax) is None


def test_evidence_span_requires_quote():
    with pytest.raises(ValueError):
        EvidenceSpan(field_name="summary", quote="")


def test_card_record_round_trip():
    card = make_card(
        time_coverage_raw="March 2013 to February 2016",
        geographic_coverage_raw="USA",
        url="https://example.org/data",
        references=("Some citation (2020).",),
        evidence=(
            EvidenceSpan("summary", "We use the scores.", "Data", "high"),
            EvidenceSpan("time", "covers March 2013 to February 2016", "Data", "medium"),
        ),
        other_information="notes",
    )
    again = card_from_record(card_to_record(card))
    assert again == card


def test_card_from_record_interchange_keys():
    record = {
        "dataset_id": "ds-01",
        "Data_Name": "Walk Score walkability scores",
        "Data_summary": "City-level walkability scores.",
        "Category": "Statical Infrastructure Data",
        "Sub-category": "Road networks and transportation infrastructure",
        "Time_Coverage": "March 2013 to February 2016",
        "Geographic_Coverage": "USA (city-level scores for the 1,609 cities in the study)",
        "URL": "https://github.com/behavioral-data/movers-public",
        "ref": [
            "Cities & Neighborhoods. Walk Score www.walkscore.com/cities-and-neighborhoods/ (accessed 17 June 2018)."
        ],
        "Other_Information": "Evidence: Scores are on a scale of 1 to 100 where 100 is the most walkable.; Location: Methods, Walkability measure; Confidence: high",
    }
    card = card_from_record(record)
    assert card.name == "Walk Score walkability scores"
    assert card.time_coverage_raw == "March 2013 to February 2016"
    assert card.url == "https://github.com/behavioral-data/movers-public"
    # consolidated evidence note becomes a summary-field span
    assert len(card.evidence) == 1
    span = card.evidence[0]
    assert span.field_name == "summary"
    assert span.quote == "Scores are on a scale of 1 to 100 where 100 is the most walkable."
    assert span.claimed_location == "Methods, Walkability measure"
    assert span.confidence_label == "high"


def test_card_from_record_requires_name():
    with pytest.raises(CardParseError):
        card_from_record({"Data_summary": "no name"})
    with pytest.raises(CardParseError):
        card_from_record(["not", "a", "dict"])


def test_has_access_info():
    assert make_card(url="https://x.org").has_access_info()
    assert make_card(references=("ref",)).has_access_info()
    assert not make_card().has_access_info()
