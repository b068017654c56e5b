import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cases import GEO_CASES, GEO_GLOBAL_CASES, GEO_UNRESOLVED_CASES, TIME_CASES, TIME_UNPARSED
from litmine.gazetteer import load_gazetteer
from litmine.harmonize import (
    ArticleSource,
    GEO_GLOBAL,
    LINK_ORIGINAL,
    LINK_REFERENCE_ONLY,
    REF_MALFORMED,
    REF_MISSING,
    REF_VALID,
    Rejection,
    TimeRange,
    check_references,
    entry_id_for,
    harmonize,
    normalize_geo,
    normalize_time,
)
from litmine.schema import DataCard

GAZ = load_gazetteer()


# ----------------------------------------------------------------- time

@pytest.mark.parametrize("raw,expected", TIME_CASES, ids=[c[0][:30] for c in TIME_CASES])
def test_time_grammar_cases(raw, expected):
    start, end, open_ended = expected
    t = normalize_time(raw)
    assert t.unparsed is None
    assert (t.start, t.end, t.open_ended) == (start, end, open_ended)


@pytest.mark.parametrize("raw", TIME_UNPARSED)
def test_time_malformed_goes_unparsed(raw):
    t = normalize_time(raw)
    assert t.unparsed == raw
    assert t.start is None and t.end is None


def test_time_embedded_range_cross_checked_by_regex_oracle():
    raw = "pre-intervention period, 2007–2018"
    t = normalize_time(raw)
    years = [int(y) for y in re.findall(r"\b(19\d{2}|20\d{2})\b", raw)]
    assert (t.start, t.end) == ((min(years), None), (max(years), None))


@given(st.text(max_size=80))
@settings(max_examples=300, deadline=None)
def test_time_totality_never_raises(raw):
    t = normalize_time(raw)
    if t.unparsed is None:
        assert t.start is not None
        if t.end is not None:
            assert (t.start[0], t.start[1] or 0) <= (t.end[0], t.end[1] or 0)
    else:
        assert t.unparsed == raw
        assert t.start is None and t.end is None


def test_time_midpoint_and_overlap():
    t = normalize_time("March 2013 to February 2016")
    assert t.midpoint_year() == 2014.5
    assert t.overlaps_years(2016, 2020)
    assert not t.overlaps_years(2017, 2020)
    assert normalize_time("since 2015").overlaps_years(2100, None)
    assert TimeRange(unparsed="x").midpoint_year() is None


# ------------------------------------------------------------------ geo

@pytest.mark.parametrize("raw,expected", GEO_CASES, ids=[c[0][:30] for c in GEO_CASES])
def test_geo_alias_cases(raw, expected):
    level, codes = expected
    g = normalize_geo(raw, GAZ)
    assert g.unresolved is None
    assert g.level == level
    assert sorted(g.country_codes) == codes


@pytest.mark.parametrize("raw", GEO_GLOBAL_CASES)
def test_geo_global_cases(raw):
    g = normalize_geo(raw, GAZ)
    assert g.level == GEO_GLOBAL
    assert g.country_codes == ()


@pytest.mark.parametrize("raw", GEO_UNRESOLVED_CASES)
def test_geo_unknown_goes_unresolved(raw):
    g = normalize_geo(raw, GAZ)
    assert g.unresolved == raw


def test_geo_subnational_keeps_region_text():
    raw = "USA (city-level scores for the 1,609 cities in the study)"
    g = normalize_geo(raw, GAZ)
    assert g.level == "subnational"
    assert g.region_text == raw


@given(st.text(max_size=60))
@settings(max_examples=200, deadline=None)
def test_geo_soundness_codes_always_iso(raw):
    g = normalize_geo(raw, GAZ)
    for code in g.country_codes:
        assert code in GAZ.codes


# ------------------------------------------------------------ references

def make_card(**overrides):
    base = dict(
        dataset_id="ds-01",
        name="Walk Score walkability scores",
        summary="City-level walkability scores for 1,609 US cities.",
        category="Statical Infrastructure Data",
        sub_category="Road networks and transportation infrastructure",
        time_coverage_raw="March 2013 to February 2016",
        geographic_coverage_raw="USA (city-level scores for the 1,609 cities in the study)",
        url="https://github.com/behavioral-data/movers-public",
        references=(
            "Cities & Neighborhoods. Walk Score www.walkscore.com/cities-and-neighborhoods/ (accessed 17 June 2018).",
        ),
    )
    base.update(overrides)
    return DataCard(**base)


def test_references_url_bearing_is_valid():
    assert check_references(make_card()) == REF_VALID


def test_references_author_year_is_valid():
    card = make_card(references=("Doe, J. Urban flows. Journal of Cities 12, 34-56 (2019).",))
    assert check_references(card) == REF_VALID


def test_references_shapeless_is_malformed():
    assert check_references(make_card(references=("see above",))) == REF_MALFORMED


def test_references_empty_is_missing():
    assert check_references(make_card(references=())) == REF_MISSING


# ------------------------------------------------------------- harmonize

SOURCE = ArticleSource(
    article_id="abc123",
    title="Countrywide natural experiment links built environment to physical activity",
    journal="Nature",
    publication_year=2025,
)


def test_harmonize_walk_score_card():
    entry = harmonize(make_card(), SOURCE, GAZ)
    assert not isinstance(entry, Rejection)
    assert entry.time.start == (2013, 3)
    assert entry.time.end == (2016, 2)
    assert entry.geo.country_codes == ("US",)
    assert entry.link_status == LINK_ORIGINAL
    assert entry.reference_status == REF_VALID
    # the spelling slip was repaired to the canonical label
    assert entry.card.category == "Statistical infrastructure data"


def test_harmonize_rejects_unknown_category():
    result = harmonize(make_card(category="Extremely novel data"), SOURCE, GAZ)
    assert isinstance(result, Rejection)
    assert result.reason == "category"


def test_harmonize_weak_support_rejection():
    card = make_card(
        references=(),
        url=None,
        time_coverage_raw="sometime",
        geographic_coverage_raw="somewhere nice",
    )
    result = harmonize(card, SOURCE, GAZ)
    assert isinstance(result, Rejection)
    assert result.reason == "weak support"


def test_harmonize_weak_support_needs_all_four_prongs():
    # parsed time alone keeps the card
    card = make_card(
        references=(),
        url=None,
        time_coverage_raw="2020",
        geographic_coverage_raw="somewhere nice",
    )
    entry = harmonize(card, SOURCE, GAZ)
    assert not isinstance(entry, Rejection)
    assert entry.link_status == LINK_REFERENCE_ONLY
    assert entry.no_access_info()


def test_harmonize_clears_cross_category_subcategory():
    card = make_card(sub_category="Aerial and drone imagery")
    entry = harmonize(card, SOURCE, GAZ)
    assert entry.card.sub_category is None


def test_harmonize_is_idempotent():
    first = harmonize(make_card(), SOURCE, GAZ)
    second = harmonize(first.card, SOURCE, GAZ, evidence_contexts=first.evidence_contexts)
    assert second.entry_id == first.entry_id
    assert second.card == first.card
    assert second.time == first.time
    assert second.geo == first.geo


def test_entry_id_deterministic():
    assert entry_id_for("a", "b") == entry_id_for("a", "b")
    assert entry_id_for("a", "b") != entry_id_for("a", "c")


def test_cross_validate_veto_falls_back_to_unparsed():
    entry = harmonize(
        make_card(),
        SOURCE,
        GAZ,
        cross_validate=lambda card, time, geo: {"time", "geo"},
    )
    assert entry.time.unparsed == make_card().time_coverage_raw
    assert entry.geo.unresolved == make_card().geographic_coverage_raw
