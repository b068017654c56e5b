/** API-shaped fixtures mirroring the synthetic desk corpus. */

import type { EntryData, SearchResponse, StatsResponse } from "../src/types.js";

export function entry(overrides: Partial<EntryData> & { entry_id: string }): EntryData {
  const base: EntryData = {
    entry_id: overrides.entry_id,
    card: {
      dataset_id: "ds-01",
      Data_Name: "Some dataset",
      Data_summary: "A dataset summary.",
      Category: "Human behavior data",
      "Sub-category": "",
      Time_Coverage: "2020",
      Geographic_Coverage: "Beijing, China",
      URL: "https://example.org/data",
      ref: ["A citation (2020)."],
      Other_Information: "",
      evidence: [],
    },
    time: { start: [2020, null], end: [2020, null], open_ended: false, unparsed: null },
    geo: { level: "subnational", country_codes: ["CN"], region_text: "Beijing", unresolved: null },
    source: { article_id: "a1", title: "An article", journal: "Nature", publication_year: 2024 },
    link_status: "original_url",
    reference_status: "valid",
    evidence_contexts: [],
  };
  return { ...base, ...overrides, card: { ...base.card, ...(overrides.card ?? {}) } };
}

export const WALK_ENTRY = entry({
  entry_id: "walk0001",
  card: {
    dataset_id: "ds-01",
    Data_Name: "Walk Score walkability scores",
    Data_summary: "City-level walkability scores for 1,609 US cities.",
    Category: "Statistical infrastructure data",
    "Sub-category": "Road networks and transportation infrastructure",
    Time_Coverage: "March 2013 to February 2016",
    Geographic_Coverage: "USA (city-level scores for the 1,609 cities in the study)",
    URL: "https://github.com/behavioral-data/movers-public",
    ref: ["Cities & Neighborhoods. Walk Score www.walkscore.com (accessed 17 June 2018)."],
    Other_Information: "",
    evidence: [
      {
        field: "summary",
        quote: "Scores are on a scale of 1 to 100 where 100 is the most walkable.",
        location: "Methods",
        confidence: "high",
      },
    ],
  },
  time: { start: [2013, 3], end: [2016, 2], open_ended: false, unparsed: null },
  geo: { level: "subnational", country_codes: ["US"], region_text: "USA", unresolved: null },
  source: {
    article_id: "a-walk",
    title: "Countrywide natural experiment links built environment to physical activity",
    journal: "Nature",
    publication_year: 2025,
  },
});

export const METRO_ENTRY = entry({
  entry_id: "metro001",
  card: {
    dataset_id: "ds-01",
    Data_Name: "Beijing metro smart card transactions",
    Data_summary: "Trip-level smart card transactions from the Beijing metro network.",
    Category: "Human behavior data",
    "Sub-category": "Human mobility traces (GPS, transit cards, ride-hailing)",
    Time_Coverage: "January 2018 to December 2019",
    Geographic_Coverage: "Beijing, China",
    URL: "https://data.example.cn/beijing-metro",
    ref: [],
    Other_Information: "",
    evidence: [],
  },
});

export const REFERENCE_ONLY_ENTRY = entry({
  entry_id: "kenya001",
  link_status: "reference_only",
  card: {
    dataset_id: "ds-01",
    Data_Name: "Kenya household survey panel",
    Data_summary: "A four-wave household survey panel across Kenya.",
    Category: "Policy and survey data",
    "Sub-category": "Population censuses and household surveys",
    Time_Coverage: "2014-2018",
    Geographic_Coverage: "Kenya",
    URL: "",
    ref: ["Kenya household survey panel. Bureau of Statistics working paper 12 (2019)."],
    Other_Information: "",
    evidence: [],
  },
  geo: { level: "country", country_codes: ["KE"], region_text: null, unresolved: null },
});

export const SEARCH_RESPONSE: SearchResponse = {
  total_matches: 1,
  entries: [{ ...WALK_ENTRY, score: 4.0 }],
};

export const STATS: StatsResponse = {
  total_entries: 25,
  by_country: { US: 3, CN: 2, KE: 1, GB: 1, unknown: 1 },
  by_category: {
    "Statistical infrastructure data": 7,
    "Human behavior data": 8,
    "Policy and survey data": 5,
    "Multimodal sensing data": 5,
  },
  by_sub_category: { unknown: 25 },
  by_collection_year: { "2014": 3, "2019": 8, "2020": 6, unknown: 2 },
  mean_publication_latency_years: 3.4,
};
