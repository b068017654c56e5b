"""Synthetic 20-article corpus with seeded gold cards.

Everything an offline end-to-end run needs is generated from one
blueprint table: article HTML files, the ingest manifest, the scripted
extraction responses for the reference completion provider, URL-probe
and web-search fixtures, a provider config wiring them together, and
the gold benchmark with L1/L2 labels.

Deliberately seeded behaviors:
  * one gold dataset is extracted as two city-level subset cards, so
    expanded matching covers it while strict does not;
  * one scripted response contains a derived-indicator card that the
    originality check must demote;
  * one card's category label carries a spelling slip that harmonization
    must repair, and one card ships consolidated evidence packed into
    Other_Information;
  * two dead URLs (one recoverable through search, one not), one
    reference-only card that search can upgrade, and one it cannot.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from litmine.evaluation import BenchmarkDataset, benchmark_query, dump_benchmark
from litmine.gazetteer import load_gazetteer
from litmine.harmonize import ArticleSource, Rejection, harmonize
from litmine.linking import build_link_query
from litmine.records import RECORD_VERSION
from litmine.schema import DataCard, EvidenceSpan, card_from_record

WALKABILITY_QUOTE = "Scores are on a scale of 1 to 100 where 100 is the most walkable."
WALKABILITY_ARTICLE_SENTENCE = (
    "Scores are on a scale of 1 to 100, where 100 is the most walkable."
)


@dataclass(frozen=True)
class DatasetSeed:
    key: str
    name: str
    summary: str
    category: str  # as the scripted "model" reports it
    sub_category: str
    time_text: str
    geo_text: str
    url: str | None
    refs: tuple[str, ...]
    relevance: str  # L1 | L2
    url_state: str  # alive | dead_recoverable | dead_lost | none_recoverable | none_lost
    other_information_evidence: bool = False  # consolidated evidence note
    fuzzy_extra_quote: str | None = None


@dataclass(frozen=True)
class ArticleSeed:
    key: str
    title: str
    journal: str
    year: int
    datasets: tuple[DatasetSeed, ...]
    split_gold: "GoldSeed | None" = None  # gold covered jointly by the datasets
    derived_card: bool = False  # script adds a derived-indicator card


@dataclass(frozen=True)
class GoldSeed:
    name: str
    summary: str
    category: str
    sub_category: str
    time_text: str
    geo_text: str
    url: str | None
    refs: tuple[str, ...]
    relevance: str


@dataclass
class SynthCorpus:
    root: Path
    manifest_path: Path
    providers_path: Path
    benchmark_path: Path
    search_fixtures_path: Path
    url_probes_path: Path
    articles: list[ArticleSeed] = field(default_factory=list)
    benchmarks: list[BenchmarkDataset] = field(default_factory=list)
    total_gold: int = 0
    strict_unmatchable: int = 1  # the split gold dataset
    expected_replaced_urls: int = 2  # dead_recoverable + none_recoverable


def _ds(
    key,
    name,
    summary,
    category,
    sub,
    time_text,
    geo_text,
    url,
    relevance="L1",
    url_state="alive",
    refs=None,
    other_info=False,
    fuzzy_extra=None,
) -> DatasetSeed:
    if refs is None:
        refs = (f"{name}. Urban Data Archive report (accessed 4 May 2024).",)
    return DatasetSeed(
        key=key,
        name=name,
        summary=summary,
        category=category,
        sub_category=sub,
        time_text=time_text,
        geo_text=geo_text,
        url=url,
        refs=tuple(refs),
        relevance=relevance,
        url_state=url_state,
        other_information_evidence=other_info,
        fuzzy_extra_quote=fuzzy_extra,
    )


def _blueprint() -> list[ArticleSeed]:
    c_infra = "Statistical infrastructure data"
    c_behavior = "Human behavior data"
    c_policy = "Policy and survey data"
    c_sensing = "Multimodal sensing data"

    walk = _ds(
        "walk-score",
        "Walk Score walkability scores",
        "City-level walkability scores for the 1,609 US cities in the study, "
        "characterizing the built environment of origin and destination cities "
        "in relocation analyses; scores range from 1 to 100 and reflect nearby "
        "amenities and pedestrian friendliness measures such as block length "
        "and intersection density.",
        "Statical Infrastructure Data",  # spelling slip: harmonization repairs it
        "Road networks and transportation infrastructure",
        "March 2013 to February 2016",
        "USA (city-level scores for the 1,609 cities in the study)",
        "https://github.com/behavioral-data/movers-public",
        refs=(
            "Cities & Neighborhoods. Walk Score www.walkscore.com/cities-and-neighborhoods/ (accessed 17 June 2018).",
        ),
        fuzzy_extra=WALKABILITY_QUOTE,
    )
    metro = _ds(
        "beijing-metro",
        "Beijing metro smart card transactions",
        "Trip-level smart card transactions from the Beijing metro network, "
        "recording entry and exit stations for workday travel between "
        "January 2018 and December 2019.",
        c_behavior,
        "Human mobility traces (GPS, transit cards, ride-hailing)",
        "January 2018 to December 2019",
        "Beijing, China",
        "https://data.example.cn/beijing-metro",
    )
    air_chicago = _ds(
        "air-chicago",
        "Chicago air quality sensor readings",
        "Hourly air quality sensor readings collected for Chicago monitoring "
        "stations from 2015 to 2020.",
        c_sensing,
        "Ground-based sensors (air quality, temperature, and noise)",
        "2015–2020",
        "Chicago, United States",
        "https://sensors.example.org/us-air/chicago",
    )
    air_houston = _ds(
        "air-houston",
        "Houston air quality sensor readings",
        "Hourly air quality sensor readings collected for Houston monitoring "
        "stations from 2015 to 2020.",
        c_sensing,
        "Ground-based sensors (air quality, temperature, and noise)",
        "2015–2020",
        "Houston, United States",
        "https://sensors.example.org/us-air/houston",
    )
    gold_air = GoldSeed(
        name="Nationwide air quality sensor readings",
        summary="Hourly air quality sensor readings collected across United "
        "States cities including Chicago and Houston monitoring stations from "
        "2015 to 2020.",
        category=c_sensing,
        sub_category="Ground-based sensors (air quality, temperature, and noise)",
        time_text="2015–2020",
        geo_text="United States (240 cities)",
        url="https://sensors.example.org/us-air",
        refs=("Nationwide air quality sensor readings. Sensor Consortium (2021).",),
        relevance="L1",
    )
    cycle = _ds(
        "london-cycle",
        "London cycle hire trips",
        "Docking-station level cycle hire trips across London covering 2016 to "
        "2021, used to measure commuting shifts after network expansion.",
        c_behavior,
        "Human mobility traces (GPS, transit cards, ride-hailing)",
        "2016–2021",
        "London, United Kingdom",
        "https://cycling.example.uk/trips",
        url_state="dead_recoverable",
    )
    footprints = _ds(
        "tokyo-footprints",
        "Tokyo building footprints",
        "Vectorized building footprints for the Tokyo metropolitan area as of "
        "2019, with use-class attributes for land-use mapping.",
        c_infra,
        "Building footprints and land-use maps",
        "2019",
        "Tokyo, Japan",
        "https://maps.example.jp/tokyo-footprints",
        relevance="L2",
        other_info=True,
    )
    kenya = _ds(
        "kenya-survey",
        "Kenya household survey panel",
        "A four-wave household survey panel across Kenya from 2014 to 2018 "
        "covering income, housing quality, and access to services.",
        c_policy,
        "Population censuses and household surveys",
        "2014–2018",
        "Kenya",
        None,
        url_state="none_lost",
        refs=("Kenya household survey panel. Bureau of Statistics working paper 12 (2019).",),
    )
    lights = _ds(
        "night-lights",
        "Global night-time lights composites",
        "Monthly global night-time lights composites from 2012 to 2022, used "
        "as a proxy for economic activity across countries.",
        c_sensing,
        "Satellite remote sensing imagery (optical, SAR, night-time lights)",
        "2012–2022",
        "Global",
        "https://earthdata.example.org/ntl-composites",
    )
    trees = _ds(
        "paris-trees",
        "Paris street tree inventory",
        "Point locations and species labels for street trees maintained by "
        "the city of Paris, 2020 snapshot.",
        c_infra,
        "Points of interest (POIs)",
        "2020",
        "Paris, France",
        "https://opendata.example.fr/paris-trees",
        relevance="L2",
    )
    bus = _ds(
        "saopaulo-bus",
        "Sao Paulo bus GPS traces",
        "Second-by-second GPS traces for the Sao Paulo municipal bus fleet "
        "from March 2019 to June 2019.",
        c_behavior,
        "Human mobility traces (GPS, transit cards, ride-hailing)",
        "March 2019 to June 2019",
        "Sao Paulo, Brazil",
        "https://transit.example.br/sp-bus-gps",
        url_state="dead_lost",
    )
    slums = _ds(
        "mumbai-boundaries",
        "Mumbai slum settlement boundaries",
        "Digitized boundaries of informal settlements in Mumbai with 2017 "
        "census-linked identifiers.",
        c_infra,
        "Administrative boundaries and zoning maps",
        "2017",
        "Mumbai, India",
        "https://gis.example.in/mumbai-settlements",
    )
    seoul = _ds(
        "seoul-temperature",
        "Seoul air temperature sensor network",
        "Ten-minute air temperature readings from a dense urban sensor "
        "network across Seoul, 2018 to 2022.",
        c_sensing,
        "Ground-based sensors (air quality, temperature, and noise)",
        "2018–2022",
        "Seoul, South Korea",
        "https://sensors.example.kr/seoul-temperature",
        relevance="L2",
    )
    census = _ds(
        "german-census",
        "German census microdata sample",
        "An anonymized microdata sample of the 2011 German census covering "
        "household composition and dwelling attributes.",
        c_policy,
        "Population censuses and household surveys",
        "2011",
        "Germany",
        None,
        url_state="none_recoverable",
        refs=("German census microdata sample. Federal statistics data report (2013).",),
    )
    jakarta = _ds(
        "jakarta-posts",
        "Geotagged social media posts during Jakarta floods",
        "Geotagged public social media posts collected during the Jakarta "
        "flood events of January 2020 to March 2020.",
        c_behavior,
        "Social media interactions and online behavior",
        "January 2020 to March 2020",
        "Jakarta, Indonesia",
        "https://social.example.id/jakarta-floods",
    )
    matatu = _ds(
        "nairobi-matatu",
        "Nairobi matatu route map",
        "A GTFS-style route map of Nairobi's semi-formal matatu network, "
        "surveyed in 2019.",
        c_infra,
        "Road networks and transportation infrastructure",
        "2019",
        "Nairobi, Kenya",
        "https://transit.example.ke/matatu-routes",
    )
    pedestrians = _ds(
        "melbourne-pedestrians",
        "Melbourne pedestrian counter hourly counts",
        "Hourly pedestrian counts from automated counters across central "
        "Melbourne, 2015 to 2023.",
        c_sensing,
        "Urban IoT devices (traffic, energy, water, environmental monitoring)",
        "2015–2023",
        "Melbourne, Australia",
        "https://counters.example.au/melbourne-pedestrians",
        relevance="L2",
    )
    yearbook = _ds(
        "china-yearbook",
        "Chinese statistical yearbook indicators",
        "City-level socioeconomic indicators digitized from Chinese "
        "statistical yearbooks, 2010 to 2020.",
        c_policy,
        "Statistical yearbooks and socioeconomic indicators",
        "2010–2020",
        "China",
        "https://stats.example.cn/yearbook-indicators",
    )
    water = _ds(
        "capetown-water",
        "Cape Town water consumption records",
        "Monthly metered water consumption records for Cape Town households "
        "from 2016 to 2018, spanning the drought restrictions.",
        c_infra,
        "Utility networks (electricity, water, and communication)",
        "2016–2018",
        "Cape Town, South Africa",
        "https://utilities.example.za/capetown-water",
    )
    drone = _ds(
        "amsterdam-drone",
        "Amsterdam rooftop drone imagery",
        "High-resolution drone imagery of Amsterdam rooftops captured in "
        "June 2021 for green-roof detection.",
        c_sensing,
        "Aerial and drone imagery",
        "June 2021",
        "Amsterdam, Netherlands",
        "https://imagery.example.nl/amsterdam-rooftops",
    )
    hospital = _ds(
        "mexicocity-hospital",
        "Mexico City hospitalization counts",
        "Weekly hospitalization counts for Mexico City facilities during "
        "2020 and 2021.",
        c_behavior,
        "Health and wellbeing data (hospitalization counts and survey-based measures)",
        "2020–2021",
        "Mexico City, Mexico",
        None,
        relevance="L2",
        url_state="none_lost",
        refs=("Mexico City hospitalization counts. Health ministry bulletin 44 (2022).",),
    )
    zoning = _ds(
        "toronto-zoning",
        "Toronto zoning bylaw documents",
        "Full text of Toronto zoning bylaw documents and amendments from "
        "2005 to 2019.",
        c_policy,
        "Government reports and urban planning documents",
        "2005–2019",
        "Toronto, Canada",
        "https://docs.example.ca/toronto-zoning",
    )
    cameras = _ds(
        "istanbul-cameras",
        "Istanbul traffic camera feeds",
        "Archived frames from city-wide traffic cameras in Istanbul covering "
        "2021 to 2022.",
        c_sensing,
        "City-wide camera networks and meteorological stations",
        "2021–2022",
        "Istanbul, Turkey",
        "https://cameras.example.tr/istanbul-traffic",
    )
    commerce = _ds(
        "lagos-commerce",
        "Lagos informal commerce survey",
        "A 2018 field survey of informal commerce activity across Lagos "
        "markets, with stall counts and turnover estimates.",
        c_behavior,
        "Socioeconomic activities (consumption, employment, and commerce)",
        "2018",
        "Lagos, Nigeria",
        "https://survey.example.ng/lagos-commerce",
        relevance="L2",
    )
    meters = _ds(
        "stockholm-meters",
        "Stockholm energy smart meter readings",
        "Hourly electricity smart meter readings for Stockholm apartment "
        "blocks, 2019 to 2021.",
        c_sensing,
        "Urban IoT devices (traffic, energy, water, environmental monitoring)",
        "2019–2021",
        "Stockholm, Sweden",
        "https://energy.example.se/stockholm-meters",
    )
    policy = _ds(
        "buenosaires-policy",
        "Buenos Aires transport regulation texts",
        "Machine-readable corpus of Buenos Aires transport regulation texts "
        "published since 2015.",
        c_policy,
        "Policy texts and regulatory frameworks",
        "since 2015",
        "Buenos Aires, Argentina",
        "https://normas.example.ar/transport-regulation",
    )

    return [
        ArticleSeed(
            "a01",
            "Countrywide natural experiment links built environment to physical activity",
            "Nature",
            2025,
            (walk,),
        ),
        ArticleSeed(
            "a02",
            "Smart card records reveal commuting structure in a megacity",
            "Nature Cities",
            2021,
            (metro,),
            derived_card=True,
        ),
        ArticleSeed(
            "a03",
            "Air quality disparities across United States cities",
            "Nature Sustainability",
            2022,
            (air_chicago, air_houston),
            split_gold=gold_air,
        ),
        ArticleSeed(
            "a04",
            "Cycling infrastructure expansion and urban mobility change",
            "Nature Communications",
            2023,
            (cycle, footprints),
        ),
        ArticleSeed(
            "a05",
            "Housing quality and service access in Kenyan cities",
            "Humanities and Social Sciences Communications",
            2019,
            (kenya,),
        ),
        ArticleSeed(
            "a06",
            "Night-time lights and street-level urban greening",
            "Scientific Reports",
            2024,
            (lights, trees),
        ),
        ArticleSeed(
            "a07",
            "Bus fleet telemetry and transit reliability in a South American metropolis",
            "npj Urban Sustainability",
            2020,
            (bus,),
        ),
        ArticleSeed(
            "a08",
            "Mapping informal settlements and urban heat exposure",
            "Nature Climate Change",
            2023,
            (slums, seoul),
        ),
        ArticleSeed(
            "a09",
            "Census microdata and neighborhood change in German cities",
            "Scientific Data",
            2016,
            (census,),
        ),
        ArticleSeed(
            "a10",
            "Social media signals of urban flood response",
            "Nature Human Behaviour",
            2021,
            (jakarta,),
        ),
        ArticleSeed(
            "a11",
            "Semi-formal transit networks and pedestrian activity",
            "Scientific Reports",
            2024,
            (matatu, pedestrians),
        ),
        ArticleSeed(
            "a12",
            "A decade of city statistics for urban policy analysis",
            "Nature Cities",
            2022,
            (yearbook,),
        ),
        ArticleSeed(
            "a13",
            "Water demand under drought restrictions in a coastal city",
            "Nature Sustainability",
            2019,
            (water,),
        ),
        ArticleSeed(
            "a14",
            "Aerial imagery and urban health surveillance",
            "Scientific Reports",
            2022,
            (drone, hospital),
        ),
        ArticleSeed(
            "a15",
            "Zoning reform and the regulation of urban land use",
            "Nature Cities",
            2020,
            (zoning,),
        ),
        ArticleSeed(
            "a16",
            "Camera networks and market activity in growing cities",
            "Nature Communications",
            2023,
            (cameras, commerce),
        ),
        ArticleSeed(
            "a17",
            "Residential energy use and the urban built environment",
            "Scientific Reports",
            2022,
            (meters,),
        ),
        ArticleSeed(
            "a18",
            "Transport regulation and mobility policy texts in a metropolitan area",
            "Humanities and Social Sciences Communications",
            2017,
            (policy,),
        ),
        ArticleSeed(
            "a19",
            "A commentary on open urban data governance",
            "Nature",
            2018,
            (),
        ),
        ArticleSeed(
            "a20",
            "Perspectives on city-scale measurement for urban science",
            "npj Urban Sustainability",
            2021,
            (),
        ),
    ]


# ------------------------------------------------------ article assembly

def _dataset_sentences(ds: DatasetSeed) -> dict[str, str]:
    return {
        "name": f"We use the {ds.name} provided by the data custodian.",
        "summary": ds.summary,
        "time": f"The records cover {ds.time_text}.",
        "geo": f"Coverage spans {ds.geo_text}.",
        "url": f"The data are available at {ds.url}." if ds.url else "",
    }


def _article_html(article: ArticleSeed) -> str:
    abstract = (
        f"Urban processes shape daily life in cities worldwide. This study, "
        f"{article.title.lower()}, draws on structured urban data sources to "
        f"quantify how the built environment and human activity interact."
    )
    intro = (
        "Cities concentrate people and infrastructure, and measuring them "
        "requires data assembled from heterogeneous sources. We describe the "
        "datasets used and how each was processed."
    )
    data_paragraphs = []
    for ds in article.datasets:
        s = _dataset_sentences(ds)
        parts = [s["name"], s["summary"], s["time"], s["geo"]]
        if s["url"]:
            parts.append(s["url"])
        data_paragraphs.append("<p>" + " ".join(parts) + "</p>")
    if not data_paragraphs:
        data_paragraphs.append(
            "<p>This commentary introduces no new datasets; it reviews how "
            "urban data are shared and governed.</p>"
        )
    methods_extra = ""
    if any(ds.fuzzy_extra_quote for ds in article.datasets):
        methods_extra = (
            " Walkability is measured on amenity access, block length, and "
            "intersection density for each origin and destination city. "
            + WALKABILITY_ARTICLE_SENTENCE
        )
    methods = (
        "All records were cleaned, deduplicated, and aggregated to the city "
        "level before analysis; robustness checks repeat every step on the "
        "raw inputs." + methods_extra
    )
    results = (
        "Across specifications the association between the urban environment "
        "and observed activity is stable, and the data sources above "
        "reproduce the headline pattern."
    )
    return f"""<!DOCTYPE html>
<html>
<head><title>{article.title}</title></head>
<body>
<article>
<div class="abstract">{abstract}</div>
<section><h2>Introduction</h2><p>{intro}</p></section>
<section><h2>Data</h2>{''.join(data_paragraphs)}</section>
<section><h2>Methods</h2><p>{methods}</p></section>
<section><h2>Results</h2><p>{results}</p></section>
</article>
</body>
</html>
"""


def _card_record(ds: DatasetSeed, index: int) -> dict:
    s = _dataset_sentences(ds)
    evidence = [
        {"field": "name", "quote": s["name"], "location": "Data", "confidence": "high"},
        {"field": "time", "quote": s["time"], "location": "Data", "confidence": "high"},
        {"field": "geo", "quote": s["geo"], "location": "Data", "confidence": "high"},
    ]
    if not ds.other_information_evidence:
        evidence.insert(
            1,
            {"field": "summary", "quote": s["summary"], "location": "Data", "confidence": "high"},
        )
    if ds.url:
        evidence.append(
            {"field": "url", "quote": s["url"], "location": "Data", "confidence": "high"}
        )
    if ds.fuzzy_extra_quote:
        evidence.append(
            {
                "field": "summary",
                "quote": ds.fuzzy_extra_quote,
                "location": "Methods",
                "confidence": "medium",
            }
        )
    other = ""
    if ds.other_information_evidence:
        other = f"Evidence: {s['summary']}; Location: Data; Confidence: high"
    return {
        "dataset_id": f"ds-{index:02d}",
        "Data_Name": ds.name,
        "Data_summary": ds.summary,
        "Category": ds.category,
        "Sub-category": ds.sub_category,
        "Time_Coverage": ds.time_text,
        "Geographic_Coverage": ds.geo_text,
        "URL": ds.url or "",
        "ref": list(ds.refs),
        "Other_Information": other,
        "evidence": evidence,
    }


_DERIVED_CARD = {
    "dataset_id": "ds-90",
    "Data_Name": "Commuting elasticity estimates",
    "Data_summary": "Regression coefficients estimated from the mobility data, "
    "summarizing how trip volumes respond to service changes.",
    "Category": "Human behavior data",
    "Sub-category": "Human mobility traces (GPS, transit cards, ride-hailing)",
    "Time_Coverage": "",
    "Geographic_Coverage": "",
    "URL": "",
    "ref": [],
    "Other_Information": "",
    "evidence": [],
}


def _script_response(article: ArticleSeed) -> list[dict]:
    cards = [_card_record(ds, i + 1) for i, ds in enumerate(article.datasets)]
    if article.derived_card:
        cards.append(dict(_DERIVED_CARD))
    return cards


# ----------------------------------------------------------- benchmarks

def _gold_record(name, summary, category, sub, time_text, geo_text, url, refs) -> dict:
    return {
        "dataset_id": "gold",
        "Data_Name": name,
        "Data_summary": summary,
        "Category": category,
        "Sub-category": sub,
        "Time_Coverage": time_text,
        "Geographic_Coverage": geo_text,
        "URL": url or "",
        "ref": list(refs),
        "Other_Information": "",
        "evidence": [],
    }


def _benchmarks(articles: list[ArticleSeed]) -> list[BenchmarkDataset]:
    out: list[BenchmarkDataset] = []
    for article in articles:
        paper_id = article.key
        n = 0
        if article.split_gold is not None:
            g = article.split_gold
            n += 1
            out.append(
                BenchmarkDataset(
                    paper_id=paper_id,
                    benchmark_id=f"{paper_id}-b{n:02d}",
                    annotation=card_from_record(
                        _gold_record(
                            g.name, g.summary, g.category, g.sub_category,
                            g.time_text, g.geo_text, g.url, g.refs,
                        )
                    ),
                    relevance=g.relevance,
                    paper_title=article.title,
                )
            )
            continue  # the per-dataset cards are subsets of this gold
        for ds in article.datasets:
            n += 1
            out.append(
                BenchmarkDataset(
                    paper_id=paper_id,
                    benchmark_id=f"{paper_id}-b{n:02d}",
                    annotation=card_from_record(
                        _gold_record(
                            ds.name, ds.summary,
                            # gold annotations carry canonical labels
                            "Statistical infrastructure data"
                            if ds.category == "Statical Infrastructure Data"
                            else ds.category,
                            ds.sub_category, ds.time_text, ds.geo_text, ds.url, ds.refs,
                        )
                    ),
                    relevance=ds.relevance,
                    paper_title=article.title,
                )
            )
    return out


# -------------------------------------------------------------- fixtures

def _mirror_url(ds: DatasetSeed) -> str:
    return f"https://mirror.example.org/{ds.key}"


def _relink_fixtures(articles: list[ArticleSeed]) -> tuple[dict, dict]:
    """URL probe table and the 'fixture' search engine used by relink."""
    gaz = load_gazetteer()
    probes: dict[str, object] = {}
    queries: dict[str, list[dict]] = {}
    for article in articles:
        source = ArticleSource(
            article_id="synthetic", title=article.title,
            journal=article.journal, publication_year=article.year,
        )
        for ds in article.datasets:
            if ds.url:
                probes[ds.url] = 404 if ds.url_state.startswith("dead") else 200
            card = card_from_record(_card_record(ds, 1))
            entry = harmonize(card, source, gaz)
            if isinstance(entry, Rejection):
                continue
            query = build_link_query(entry, gaz)
            s = _dataset_sentences(ds)
            if ds.url_state in ("dead_recoverable", "none_recoverable"):
                snippet = " ".join(p for p in (s["name"], s["summary"], s["url"]) if p)
                queries[query] = [
                    {
                        "url": _mirror_url(ds),
                        "title": ds.name,
                        "snippet": snippet,
                    }
                ]
                probes[_mirror_url(ds)] = 200
            elif ds.url_state == "dead_lost":
                queries[query] = [
                    {
                        "url": "https://spam.example.net/listicle",
                        "title": "Ten unrelated gardening tips",
                        "snippet": "Tomato planting advice for patient hobbyists.",
                    }
                ]
            # none_lost entries stay un-recorded: unknown query -> no hits
    return probes, queries


def _comparison_fixtures(benchmarks: list[BenchmarkDataset]) -> dict[str, dict[str, list[dict]]]:
    """Two recorded engines with complementary coverage: 'alpha' finds
    even-indexed benchmarks at rank 2, 'beta' odd-indexed ones at rank 1."""
    alpha: dict[str, list[dict]] = {}
    beta: dict[str, list[dict]] = {}
    filler = {
        "url": "https://nowhere.example.net/blog",
        "title": "A general listicle about open data",
        "snippet": "Ten portals you could browse on a rainy afternoon.",
    }
    for i, bench in enumerate(benchmarks):
        query = benchmark_query(bench)
        good = {
            "url": bench.annotation.url or f"https://landing.example.org/{bench.benchmark_id}",
            "title": bench.annotation.name,
            "snippet": bench.annotation.summary,
        }
        if i % 2 == 0:
            alpha[query] = [filler, good]
            beta[query] = []
        else:
            alpha[query] = []
            beta[query] = [good]
    return {"alpha": alpha, "beta": beta}


# -------------------------------------------------------------- top level

def build_synthetic_corpus(root: str | Path) -> SynthCorpus:
    """Materialize the corpus under `root` and return its description."""
    root = Path(root)
    articles_dir = root / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)

    articles = _blueprint()
    names = [ds.name for a in articles for ds in a.datasets]
    assert len(names) == len(set(names)), "dataset names must be unique"

    manifest_rows = []
    script: dict[str, str] = {}
    for article in articles:
        path = articles_dir / f"{article.key}.html"
        path.write_text(_article_html(article), encoding="utf-8")
        manifest_rows.append(
            {
                "path": f"articles/{article.key}.html",
                "journal": article.journal,
                "year": article.year,
            }
        )
        script[article.title] = json.dumps(
            _script_response(article), ensure_ascii=False
        )

    manifest_path = root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"articles": manifest_rows}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    script_path = root / "extraction_script.json"
    script_path.write_text(
        json.dumps({"version": 1, "responses": script}, ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )

    benchmarks = _benchmarks(articles)
    benchmark_path = root / "benchmark.json"
    benchmark_path.write_text(
        json.dumps(
            {"record": "benchmark", "version": RECORD_VERSION, "data": dump_benchmark(benchmarks)},
            ensure_ascii=False,
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )

    probes, relink_queries = _relink_fixtures(articles)
    url_probes_path = root / "url_probes.json"
    url_probes_path.write_text(
        json.dumps({"version": 1, "probes": probes}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    engines = {"fixture": relink_queries, **_comparison_fixtures(benchmarks)}
    search_fixtures_path = root / "search_fixtures.json"
    search_fixtures_path.write_text(
        json.dumps({"version": 1, "engines": engines}, ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )

    providers_path = root / "providers.json"
    providers_path.write_text(
        json.dumps(
            {
                "completion": {"kind": "reference", "script_path": "extraction_script.json"},
                "embedding": {"kind": "reference", "dim": 256},
                "judge": {"kind": "reference"},
                "search": {"kind": "fixture", "fixtures_path": "search_fixtures.json", "engine_id": "fixture"},
                "url_probe": {"kind": "fixture", "fixtures_path": "url_probes.json"},
                "relevance": {"kind": "reference"},
                "concurrency": 4,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )

    return SynthCorpus(
        root=root,
        manifest_path=manifest_path,
        providers_path=providers_path,
        benchmark_path=benchmark_path,
        search_fixtures_path=search_fixtures_path,
        url_probes_path=url_probes_path,
        articles=articles,
        benchmarks=benchmarks,
        total_gold=len(benchmarks),
    )
