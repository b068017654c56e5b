/** Typed client for the catalog API. Every displayed value originates
 * from one of these responses; the UI never fabricates fields. */

import type {
  ApiErrorBody,
  EntryData,
  RagResponse,
  SearchResponse,
  StatsResponse,
} from "./types.js";
import { PAGE_SIZE, type ViewState } from "./state.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export function searchQueryString(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.q) params.set("q", state.q);
  for (const c of state.categories) params.append("category", c);
  for (const s of state.subCategories) params.append("sub_category", s);
  for (const c of state.countries) params.append("country", c);
  if (state.yearFrom !== null) params.set("year_from", String(state.yearFrom));
  if (state.yearTo !== null) params.set("year_to", String(state.yearTo));
  params.set("limit", String(PAGE_SIZE));
  if (state.offset > 0) params.set("offset", String(state.offset));
  return params.toString();
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(input, init);
  if (!resp.ok) {
    let body: ApiErrorBody | null = null;
    try {
      body = (await resp.json()) as ApiErrorBody;
    } catch {
      // non-JSON error body
    }
    throw new ApiError(resp.status, body?.code ?? "http_error", body?.message ?? resp.statusText);
  }
  return (await resp.json()) as T;
}

export function searchDatasets(
  base: string,
  state: ViewState,
  signal?: AbortSignal,
): Promise<SearchResponse> {
  return request<SearchResponse>(`${base}/api/datasets?${searchQueryString(state)}`, { signal });
}

export function getDataset(base: string, entryId: string, signal?: AbortSignal): Promise<EntryData> {
  return request<EntryData>(`${base}/api/datasets/${encodeURIComponent(entryId)}`, { signal });
}

export function ragQuery(
  base: string,
  text: string,
  k: number,
  signal?: AbortSignal,
): Promise<RagResponse> {
  return request<RagResponse>(`${base}/api/rag/query`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text, k }),
    signal,
  });
}

export function getStats(base: string, signal?: AbortSignal): Promise<StatsResponse> {
  return request<StatsResponse>(`${base}/api/stats`, { signal });
}
