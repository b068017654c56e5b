/** Wiring: URL is the single source of view state; the API is the
 * single source of data. Changing the query cancels any in-flight
 * request before issuing the next one. */

import { ApiError, getDataset, getStats, ragQuery, searchDatasets } from "./api.js";
import {
  decodeState,
  defaultState,
  encodeState,
  yearRangeError,
  PAGE_SIZE,
  type ViewState,
} from "./state.js";
import {
  renderDetail,
  renderError,
  renderFacets,
  renderRagResults,
  renderResults,
  showYearError,
} from "./render.js";
import type { StatsResponse } from "./types.js";

const BASE = "";

let state: ViewState = defaultState();
let stats: StatsResponse | null = null;
let inflight: AbortController | null = null;

function $(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function pushState(next: ViewState): void {
  state = next;
  const query = encodeState(state).toString();
  history.pushState(null, "", query ? `?${query}` : location.pathname);
  void render();
}

function freshSignal(): AbortSignal {
  inflight?.abort();
  inflight = new AbortController();
  return inflight.signal;
}

async function render(): Promise<void> {
  $("search-view").hidden = state.view !== "search";
  $("detail-view").hidden = state.view !== "detail";
  $("rag-view").hidden = state.view !== "rag";
  const queryBox = $("query-box") as HTMLInputElement;
  if (queryBox.value !== state.q) queryBox.value = state.q;

  try {
    if (state.view === "search") await renderSearch();
    else if (state.view === "detail") await renderDetailView();
    else await renderRagView();
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    const target = state.view === "rag" ? $("rag-results") : $("results");
    if (err instanceof ApiError) {
      renderError(target, `${err.code}: ${err.message}`, err.status >= 500);
    } else {
      renderError(target, String(err), true);
    }
  }
}

async function renderSearch(): Promise<void> {
  const error = yearRangeError(state);
  showYearError($("facets"), error);
  if (error) return; // inline validation; no request leaves the page
  const response = await searchDatasets(BASE, state, freshSignal());
  renderResults($("results"), response, (entryId) =>
    pushState({ ...state, view: "detail", entryId }),
  );
  renderPager(response.total_matches);
}

function renderPager(total: number): void {
  const pager = $("pager");
  pager.replaceChildren();
  const prev = document.createElement("button");
  prev.textContent = "previous";
  prev.disabled = state.offset <= 0;
  prev.addEventListener("click", () =>
    pushState({ ...state, offset: Math.max(0, state.offset - PAGE_SIZE) }),
  );
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = state.offset + PAGE_SIZE >= total;
  next.addEventListener("click", () => pushState({ ...state, offset: state.offset + PAGE_SIZE }));
  pager.append(prev, next);
}

async function renderDetailView(): Promise<void> {
  if (!state.entryId) {
    pushState({ ...state, view: "search" });
    return;
  }
  const entry = await getDataset(BASE, state.entryId, freshSignal());
  renderDetail($("detail-view"), entry, () =>
    pushState({ ...state, view: "search", entryId: null }),
  );
}

async function renderRagView(): Promise<void> {
  const input = $("rag-input") as HTMLInputElement;
  const submit = $("rag-submit") as HTMLButtonElement;
  if (input.value !== state.ragText) input.value = state.ragText;
  submit.disabled = input.value.trim() === "";
  if (!state.ragText.trim()) {
    $("rag-results").replaceChildren();
    return;
  }
  const response = await ragQuery(BASE, state.ragText, state.ragK, freshSignal());
  // grounded entries only: render exactly what the API returned
  renderRagResults($("rag-results"), response.results, (entryId) =>
    pushState({ ...state, view: "detail", entryId }),
  );
}

function wireControls(): void {
  const queryBox = $("query-box") as HTMLInputElement;
  $("search-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    pushState({ ...state, view: "search", q: queryBox.value.trim(), offset: 0 });
  });

  const ragInput = $("rag-input") as HTMLInputElement;
  ragInput.addEventListener("input", () => {
    ($("rag-submit") as HTMLButtonElement).disabled = ragInput.value.trim() === "";
  });
  $("rag-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (ragInput.value.trim() === "") return;
    pushState({ ...state, view: "rag", ragText: ragInput.value.trim() });
  });

  for (const [id, view] of [
    ["nav-search", "search"],
    ["nav-rag", "rag"],
  ] as const) {
    $(id).addEventListener("click", (ev) => {
      ev.preventDefault();
      pushState({ ...state, view });
    });
  }
}

async function init(): Promise<void> {
  state = decodeState(new URLSearchParams(location.search));
  wireControls();
  try {
    stats = await getStats(BASE);
    drawFacets();
  } catch (err) {
    renderError($("facets"), `stats unavailable: ${String(err)}`, true);
  }
  window.addEventListener("popstate", () => {
    state = decodeState(new URLSearchParams(location.search));
    drawFacets();
    void render();
  });
  await render();
}

function drawFacets(): void {
  if (!stats) return;
  renderFacets($("facets"), stats, state, {
    onCategoryToggle: (category, active) => {
      const categories = active
        ? [...state.categories, category].sort()
        : state.categories.filter((c) => c !== category);
      pushState({ ...state, view: "search", categories, offset: 0 });
    },
    onCountryChange: (codes) =>
      pushState({ ...state, view: "search", countries: [...codes].sort(), offset: 0 }),
    onYearChange: (yearFrom, yearTo) =>
      pushState({ ...state, view: "search", yearFrom, yearTo, offset: 0 }),
  });
}

document.addEventListener("DOMContentLoaded", () => {
  void init();
});
