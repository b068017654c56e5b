/** View state <-> URL. The URL carries the complete state, so every
 * search is shareable and a reload reproduces the identical view. */

export type ViewName = "search" | "detail" | "rag";

export interface ViewState {
  view: ViewName;
  q: string;
  categories: string[];
  subCategories: string[];
  countries: string[];
  yearFrom: number | null;
  yearTo: number | null;
  offset: number;
  entryId: string | null;
  ragText: string;
  ragK: number;
}

export const PAGE_SIZE = 20;

export function defaultState(): ViewState {
  return {
    view: "search",
    q: "",
    categories: [],
    subCategories: [],
    countries: [],
    yearFrom: null,
    yearTo: null,
    offset: 0,
    entryId: null,
    ragText: "",
    ragK: 10,
  };
}

function intOrNull(raw: string | null): number | null {
  if (raw === null || raw === "") return null;
  const n = Number.parseInt(raw, 10);
  return Number.isFinite(n) ? n : null;
}

export function decodeState(params: URLSearchParams): ViewState {
  const state = defaultState();
  const view = params.get("view");
  if (view === "detail" || view === "rag") state.view = view;
  state.q = params.get("q") ?? "";
  state.categories = params.getAll("category").filter(Boolean).sort();
  state.subCategories = params.getAll("sub_category").filter(Boolean).sort();
  state.countries = params.getAll("country").filter(Boolean).sort();
  state.yearFrom = intOrNull(params.get("year_from"));
  state.yearTo = intOrNull(params.get("year_to"));
  state.offset = Math.max(0, intOrNull(params.get("offset")) ?? 0);
  state.entryId = params.get("entry");
  state.ragText = params.get("rag_text") ?? "";
  state.ragK = intOrNull(params.get("rag_k")) ?? 10;
  return state;
}

export function encodeState(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.view !== "search") params.set("view", state.view);
  if (state.q) params.set("q", state.q);
  for (const c of [...state.categories].sort()) params.append("category", c);
  for (const s of [...state.subCategories].sort()) params.append("sub_category", s);
  for (const c of [...state.countries].sort()) params.append("country", c);
  if (state.yearFrom !== null) params.set("year_from", String(state.yearFrom));
  if (state.yearTo !== null) params.set("year_to", String(state.yearTo));
  if (state.offset > 0) params.set("offset", String(state.offset));
  if (state.entryId) params.set("entry", state.entryId);
  if (state.ragText) params.set("rag_text", state.ragText);
  if (state.ragK !== 10) params.set("rag_k", String(state.ragK));
  return params;
}

/** Inline validation before any request goes out. */
export function yearRangeError(state: ViewState): string | null {
  if (state.yearFrom !== null && state.yearTo !== null && state.yearFrom > state.yearTo) {
    return "year range is reversed";
  }
  return null;
}
