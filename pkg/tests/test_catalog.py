import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litmine.catalog import Catalog, SearchQuery, StorageError
from litmine.gazetteer import load_gazetteer
from litmine.harmonize import ArticleSource, harmonize
from litmine.providers import ReferenceEmbeddingProvider
from litmine.schema import DataCard

GAZ = load_gazetteer()


def make_entry(
    name,
    summary,
    category="Human behavior data",
    sub_category=None,
    geo="Beijing, China",
    time="2020",
    url="https://example.org/x",
    article_id="art1",
    year=2024,
):
    card = DataCard(
        dataset_id=name.lower().replace(" ", "-")[:24],
        name=name,
        summary=summary,
        category=category,
        sub_category=sub_category,
        time_coverage_raw=time,
        geographic_coverage_raw=geo,
        url=url,
        references=("Ref file (accessed 2020).",),
    )
    source = ArticleSource(article_id, f"Article for {name}", "Nature", year)
    entry = harmonize(card, source, GAZ)
    assert not isinstance(entry, tuple)
    return entry


def desk_entries():
    return [
        make_entry(
            "Walk Score walkability scores",
            "City-level walkability scores for 1,609 US cities describing pedestrian friendliness.",
            category="Statistical infrastructure data",
            geo="USA (city-level)",
            time="March 2013 to February 2016",
            article_id="art-walk",
            year=2025,
        ),
        make_entry(
            "Beijing metro smart card transactions",
            "Trip-level smart card transactions from the Beijing metro network.",
            geo="Beijing, China",
            time="2018–2019",
            article_id="art-metro",
        ),
        make_entry(
            "Global night-time lights composites",
            "Monthly night-time lights composites used as an economic activity proxy.",
            category="Multimodal sensing data",
            geo="Global",
            time="2012–2022",
            article_id="art-lights",
        ),
    ]


def fresh_catalog(entries=None, store_dir=None):
    catalog = Catalog(ReferenceEmbeddingProvider(), store_dir=store_dir)
    if entries:
        catalog.upsert(entries)
    return catalog


# ------------------------------------------------------------- upsert

def test_upsert_fresh_and_idempotent():
    catalog = fresh_catalog()
    entries = desk_entries()
    assert catalog.upsert(entries) == (3, 0)
    assert catalog.upsert(entries) == (0, 3)
    assert catalog.size == 3


def test_upsert_collision_last_writer_wins():
    catalog = fresh_catalog(desk_entries())
    changed = replace(
        desk_entries()[0],
        card=replace(desk_entries()[0].card, summary="A different summary entirely."),
    )
    assert catalog.upsert([changed]) == (0, 1)
    assert catalog.get(changed.entry_id).card.summary == "A different summary entirely."
    assert catalog.size == 3


# ------------------------------------------------------------- search

def test_search_keyword_ranks_walkability_first():
    catalog = fresh_catalog(desk_entries())
    result = catalog.search(SearchQuery(keywords="walkability"))
    assert result.total_matches == 1
    assert result.entries[0][0].card.name == "Walk Score walkability scores"
    # score oracle: one name hit (x3) plus one summary hit (x1)
    assert result.entries[0][1] == 4.0


def test_search_name_weighted_over_summary():
    catalog = fresh_catalog(
        [
            make_entry("Transit survey", "About buses.", article_id="a1"),
            make_entry("Household panel", "A transit-focused household panel.", article_id="a2"),
        ]
    )
    result = catalog.search(SearchQuery(keywords="transit"))
    assert [e.card.name for e, _ in result.entries] == ["Transit survey", "Household panel"]
    assert [s for _, s in result.entries] == [3.0, 1.0]


def test_search_country_facet():
    catalog = fresh_catalog(desk_entries())
    result = catalog.search(SearchQuery(countries=("US",)))
    assert result.total_matches == 1
    assert result.entries[0][0].card.name == "Walk Score walkability scores"


def test_search_empty_year_range():
    catalog = fresh_catalog(desk_entries())
    result = catalog.search(SearchQuery(year_from=1800, year_to=1801))
    assert result.total_matches == 0
    assert result.entries == ()


def test_search_no_filters_returns_whole_catalog():
    catalog = fresh_catalog(desk_entries())
    result = catalog.search(SearchQuery(limit=2))
    assert result.total_matches == 3
    assert len(result.entries) == 2  # paginated
    more = catalog.search(SearchQuery(limit=2, offset=2))
    assert len(more.entries) == 1


def test_search_validates_query():
    catalog = fresh_catalog(desk_entries())
    with pytest.raises(ValueError):
        catalog.search(SearchQuery(limit=0))
    with pytest.raises(ValueError):
        catalog.search(SearchQuery(limit=101))
    with pytest.raises(ValueError):
        catalog.search(SearchQuery(year_from=2020, year_to=2010))


def test_search_scores_non_increasing_and_tiebreak_stable():
    catalog = fresh_catalog(desk_entries())
    result = catalog.search(SearchQuery(keywords="the scores transactions composites"))
    scores = [s for _, s in result.entries]
    assert scores == sorted(scores, reverse=True)
    again = catalog.search(SearchQuery(keywords="the scores transactions composites"))
    assert [e.entry_id for e, _ in result.entries] == [e.entry_id for e, _ in again.entries]


CATEGORIES = [
    "Statistical infrastructure data",
    "Human behavior data",
    "Policy and survey data",
    "Multimodal sensing data",
]


@given(
    keywords=st.sampled_from(["", "scores", "transactions", "lights", "city"]),
    category=st.sampled_from([None] + CATEGORIES),
    country=st.sampled_from([None, "US", "CN", "GB"]),
    year_from=st.sampled_from([None, 2010, 2015, 2019]),
)
@settings(max_examples=80, deadline=None)
def test_facet_monotonicity(keywords, category, country, year_from):
    catalog = test_facet_monotonicity.catalog
    base = SearchQuery(keywords=keywords, limit=100)
    baseline = catalog.search(base).total_matches
    faceted = SearchQuery(
        keywords=keywords,
        categories=(category,) if category else (),
        countries=(country,) if country else (),
        year_from=year_from,
        limit=100,
    )
    assert catalog.search(faceted).total_matches <= baseline


test_facet_monotonicity.catalog = fresh_catalog(desk_entries())


# ---------------------------------------------------------------- rag

def test_rag_exact_summary_is_self_similar():
    catalog = fresh_catalog(desk_entries())
    for entry in catalog.all_entries():
        ranked = catalog.rag_retrieve(entry.card.summary, k=1)
        assert ranked[0][0].entry_id == entry.entry_id
        assert ranked[0][1] == pytest.approx(1.0, abs=1e-9)


def test_rag_pedestrian_query_finds_walkability():
    catalog = fresh_catalog(desk_entries())
    ranked = catalog.rag_retrieve("pedestrian friendliness of US cities", k=2)
    assert ranked[0][0].card.name == "Walk Score walkability scores"


def test_rag_k_larger_than_catalog():
    catalog = fresh_catalog(desk_entries())
    ranked = catalog.rag_retrieve("anything at all", k=50)
    assert len(ranked) == 3


def test_rag_rejects_bad_inputs():
    catalog = fresh_catalog(desk_entries())
    with pytest.raises(ValueError):
        catalog.rag_retrieve("", k=1)
    with pytest.raises(ValueError):
        catalog.rag_retrieve("x", k=0)


def test_rag_permutation_invariant():
    entries = desk_entries()
    forward = fresh_catalog(entries)
    backward = fresh_catalog(list(reversed(entries)))
    q = "city transactions"
    assert [e.entry_id for e, _ in forward.rag_retrieve(q, 3)] == [
        e.entry_id for e, _ in backward.rag_retrieve(q, 3)
    ]


# -------------------------------------------------------------- stats

def test_stats_single_entry_latency():
    # collected 2013-2016 (midpoint 2014.5), published 2025 -> 10.5
    catalog = fresh_catalog(
        [
            make_entry(
                "Walk Score walkability scores",
                "Scores.",
                category="Statistical infrastructure data",
                geo="USA",
                time="March 2013 to February 2016",
                year=2025,
            )
        ]
    )
    stats = catalog.compute_stats()
    assert stats.total_entries == 1
    assert stats.mean_publication_latency_years == pytest.approx(2025 - 2014.5)
    assert stats.by_country == {"US": 1}
    assert stats.by_collection_year == {"2014": 1}


def test_stats_empty_catalog():
    stats = fresh_catalog().compute_stats()
    assert stats.total_entries == 0
    assert stats.by_country == {}
    assert stats.mean_publication_latency_years is None


def test_stats_counts_sum_to_size_per_dimension():
    catalog = fresh_catalog(desk_entries())
    stats = catalog.compute_stats()
    for dim in (stats.by_country, stats.by_category, stats.by_sub_category, stats.by_collection_year):
        assert sum(dim.values()) == stats.total_entries


def test_stats_negative_latency_clamped():
    catalog = fresh_catalog(
        [make_entry("Future data", "From tomorrow.", time="2030", year=2020)]
    )
    assert catalog.compute_stats().mean_publication_latency_years == 0.0


# -------------------------------------------------------- persistence

def test_store_round_trip(tmp_path):
    store = tmp_path / "store"
    catalog = fresh_catalog(desk_entries(), store_dir=store)
    reopened = fresh_catalog(store_dir=store)
    assert reopened.size == 3
    assert {e.entry_id for e in reopened.all_entries()} == {
        e.entry_id for e in catalog.all_entries()
    }
    # retrieval works identically after reopen
    assert (
        reopened.rag_retrieve("walkability scores", 1)[0][0].entry_id
        == catalog.rag_retrieve("walkability scores", 1)[0][0].entry_id
    )


def test_store_rebuild_recovers_index(tmp_path):
    store = tmp_path / "store"
    fresh_catalog(desk_entries(), store_dir=store)
    reopened = fresh_catalog(store_dir=store)
    assert reopened.rebuild() == 3
    assert reopened.search(SearchQuery(keywords="walkability")).total_matches == 1


def test_store_corrupt_line_raises(tmp_path):
    store = tmp_path / "store"
    fresh_catalog(desk_entries(), store_dir=store)
    with open(store / "entries.jsonl", "a", encoding="utf-8") as fh:
        fh.write("{不是 json\n")
    with pytest.raises(StorageError):
        fresh_catalog(store_dir=store)


def test_random_facet_chains_monotone():
    catalog = fresh_catalog(desk_entries())
    rng = random.Random(5)
    for _ in range(50):
        keywords = rng.choice(["", "scores", "city lights"])
        q = SearchQuery(keywords=keywords, limit=100)
        total = catalog.search(q).total_matches
        # add facets one at a time; totals may only shrink
        q2 = SearchQuery(keywords=keywords, categories=(rng.choice(CATEGORIES),), limit=100)
        t2 = catalog.search(q2).total_matches
        q3 = SearchQuery(
            keywords=keywords,
            categories=q2.categories,
            countries=(rng.choice(["US", "CN", "GB"]),),
            limit=100,
        )
        t3 = catalog.search(q3).total_matches
        assert total >= t2 >= t3
