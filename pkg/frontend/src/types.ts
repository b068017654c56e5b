/** Shapes mirroring the catalog API's documented response schema. */

export interface EvidenceItem {
  field: string;
  quote: string;
  location: string;
  confidence: string;
}

export interface CardData {
  dataset_id: string;
  Data_Name: string;
  Data_summary: string;
  Category: string;
  "Sub-category": string;
  Time_Coverage: string;
  Geographic_Coverage: string;
  URL: string;
  ref: string[];
  Other_Information: string;
  evidence: EvidenceItem[];
}

export interface TimeData {
  start: [number, number | null] | null;
  end: [number, number | null] | null;
  open_ended: boolean;
  unparsed: string | null;
}

export interface GeoData {
  level: string;
  country_codes: string[];
  region_text: string | null;
  unresolved: string | null;
}

export interface SourceData {
  article_id: string;
  title: string;
  journal: string;
  publication_year: number | null;
}

export type LinkStatus = "verified_url" | "original_url" | "reference_only";

export interface EntryData {
  entry_id: string;
  card: CardData;
  time: TimeData;
  geo: GeoData;
  source: SourceData;
  link_status: LinkStatus;
  reference_status: string;
  evidence_contexts: string[];
  score?: number;
}

export interface SearchResponse {
  total_matches: number;
  entries: EntryData[];
}

export interface RagResponse {
  results: EntryData[];
}

export interface StatsResponse {
  total_entries: number;
  by_country: Record<string, number>;
  by_category: Record<string, number>;
  by_sub_category: Record<string, number>;
  by_collection_year: Record<string, number>;
  mean_publication_latency_years: number | null;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
