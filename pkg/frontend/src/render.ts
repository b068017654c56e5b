/** DOM builders. All pure functions of API data + view state: rendering
 * the same inputs twice yields identical markup, which is what makes
 * URL-encoded views reload-stable. */

import type { EntryData, SearchResponse, StatsResponse } from "./types.js";
import type { ViewState } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const LINK_BADGES: Record<string, { label: string; cls: string }> = {
  verified_url: { label: "verified link", cls: "badge badge-verified" },
  original_url: { label: "original link", cls: "badge badge-original" },
  reference_only: { label: "reference only", cls: "badge badge-reference" },
};

export function linkBadge(status: string): HTMLElement {
  const spec = LINK_BADGES[status] ?? { label: status, cls: "badge" };
  return el("span", spec.cls, spec.label);
}

function formatTime(entry: EntryData): string {
  const t = entry.time;
  if (t.unparsed !== null || t.start === null) return entry.card.Time_Coverage || "unstated";
  const fmt = (p: [number, number | null]) =>
    p[1] !== null ? `${p[0]}-${String(p[1]).padStart(2, "0")}` : String(p[0]);
  if (t.open_ended) return `${fmt(t.start)} onward`;
  if (t.end === null || fmt(t.end) === fmt(t.start)) return fmt(t.start);
  return `${fmt(t.start)} to ${fmt(t.end)}`;
}

function formatGeo(entry: EntryData): string {
  const g = entry.geo;
  if (g.unresolved !== null) return entry.card.Geographic_Coverage || "unstated";
  if (g.level === "global") return "global";
  return g.country_codes.join(", ");
}

// ------------------------------------------------------------- results

export function renderResults(
  container: HTMLElement,
  response: SearchResponse,
  onSelect: (entryId: string) => void,
): void {
  container.replaceChildren();
  const count = el("p", "result-count", `${response.total_matches} matching datasets`);
  container.appendChild(count);
  const list = el("ol", "result-list");
  for (const entry of response.entries) {
    const item = el("li", "result-item");
    item.dataset.entryId = entry.entry_id;
    const title = el("a", "result-name", entry.card.Data_Name);
    title.href = "#";
    title.addEventListener("click", (ev) => {
      ev.preventDefault();
      onSelect(entry.entry_id);
    });
    item.appendChild(title);
    item.appendChild(linkBadge(entry.link_status));
    item.appendChild(el("p", "result-summary", entry.card.Data_summary));
    const meta = el("p", "result-meta");
    meta.textContent = [entry.card.Category, formatGeo(entry), formatTime(entry)]
      .filter(Boolean)
      .join(" · ");
    item.appendChild(meta);
    list.appendChild(item);
  }
  container.appendChild(list);
}

// -------------------------------------------------------------- facets

export interface FacetHandlers {
  onCategoryToggle: (category: string, active: boolean) => void;
  onCountryChange: (codes: string[]) => void;
  onYearChange: (from: number | null, to: number | null) => void;
}

export function renderFacets(
  container: HTMLElement,
  stats: StatsResponse,
  state: ViewState,
  handlers: FacetHandlers,
): void {
  container.replaceChildren();

  const catPanel = el("fieldset", "facet-panel facet-categories");
  catPanel.appendChild(el("legend", undefined, "Category"));
  for (const [category, count] of Object.entries(stats.by_category).sort()) {
    if (category === "unknown") continue;
    const label = el("label", "facet-option");
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.value = category;
    box.checked = state.categories.includes(category);
    box.addEventListener("change", () => handlers.onCategoryToggle(category, box.checked));
    label.appendChild(box);
    label.appendChild(el("span", undefined, `${category} (${count})`));
    catPanel.appendChild(label);
  }
  container.appendChild(catPanel);

  const countryPanel = el("fieldset", "facet-panel facet-countries");
  countryPanel.appendChild(el("legend", undefined, "Country"));
  const select = el("select") as HTMLSelectElement;
  select.multiple = true;
  for (const [code, count] of Object.entries(stats.by_country).sort()) {
    if (code === "unknown" || code === "global") continue;
    const option = el("option", undefined, `${code} (${count})`) as HTMLOptionElement;
    option.value = code;
    option.selected = state.countries.includes(code);
    select.appendChild(option);
  }
  select.addEventListener("change", () =>
    handlers.onCountryChange(Array.from(select.selectedOptions).map((o) => o.value)),
  );
  countryPanel.appendChild(select);
  container.appendChild(countryPanel);

  const years = Object.keys(stats.by_collection_year)
    .filter((y) => y !== "unknown")
    .map((y) => Number.parseInt(y, 10))
    .filter(Number.isFinite);
  const yearPanel = el("fieldset", "facet-panel facet-years");
  yearPanel.appendChild(el("legend", undefined, "Collection year"));
  const lo = years.length ? Math.min(...years) : 1900;
  const hi = years.length ? Math.max(...years) : 2100;
  const from = el("input", "year-from") as HTMLInputElement;
  const to = el("input", "year-to") as HTMLInputElement;
  for (const [input, value] of [
    [from, state.yearFrom],
    [to, state.yearTo],
  ] as const) {
    input.type = "number";
    input.min = String(lo);
    input.max = String(hi);
    input.value = value !== null ? String(value) : "";
  }
  from.placeholder = String(lo);
  to.placeholder = String(hi);
  const emit = () =>
    handlers.onYearChange(
      from.value === "" ? null : Number.parseInt(from.value, 10),
      to.value === "" ? null : Number.parseInt(to.value, 10),
    );
  from.addEventListener("change", emit);
  to.addEventListener("change", emit);
  yearPanel.appendChild(from);
  yearPanel.appendChild(el("span", undefined, " to "));
  yearPanel.appendChild(to);
  const error = el("p", "year-error");
  error.hidden = true;
  yearPanel.appendChild(error);
  container.appendChild(yearPanel);
}

export function showYearError(container: HTMLElement, message: string | null): void {
  const node = container.querySelector<HTMLElement>(".year-error");
  if (!node) return;
  node.hidden = message === null;
  node.textContent = message ?? "";
}

// -------------------------------------------------------------- detail

export function renderDetail(
  container: HTMLElement,
  entry: EntryData,
  onBack: () => void,
): void {
  container.replaceChildren();
  const back = el("a", "back-link", "< back to results");
  back.href = "#";
  back.addEventListener("click", (ev) => {
    ev.preventDefault();
    onBack();
  });
  container.appendChild(back);

  container.appendChild(el("h2", "detail-name", entry.card.Data_Name));
  container.appendChild(linkBadge(entry.link_status));
  container.appendChild(el("p", "detail-summary", entry.card.Data_summary));

  const facts = el("dl", "detail-facts");
  const fact = (term: string, value: string) => {
    facts.appendChild(el("dt", undefined, term));
    facts.appendChild(el("dd", undefined, value));
  };
  fact("Category", entry.card.Category);
  if (entry.card["Sub-category"]) fact("Sub-category", entry.card["Sub-category"]);
  fact("Time coverage", formatTime(entry));
  fact("Geography", formatGeo(entry));
  container.appendChild(facts);

  // a usable outbound link is rendered only when one is on record;
  // reference-only entries show their citation instead of a dead URL
  if (entry.link_status !== "reference_only" && entry.card.URL) {
    const link = el("a", "detail-url", entry.card.URL) as HTMLAnchorElement;
    link.href = entry.card.URL;
    link.rel = "noopener";
    container.appendChild(link);
  }

  if (entry.card.ref.length) {
    const refs = el("ul", "detail-refs");
    for (const ref of entry.card.ref) refs.appendChild(el("li", undefined, ref));
    container.appendChild(refs);
  }

  if (entry.card.evidence.length) {
    const evidence = el("section", "detail-evidence");
    evidence.appendChild(el("h3", undefined, "Evidence"));
    for (const item of entry.card.evidence) {
      const quote = el("blockquote", "evidence-quote", item.quote);
      quote.dataset.field = item.field;
      evidence.appendChild(quote);
      evidence.appendChild(
        el("p", "evidence-location", item.location ? `from: ${item.location}` : ""),
      );
    }
    container.appendChild(evidence);
  }

  const src = entry.source;
  const year = src.publication_year !== null ? ` (${src.publication_year})` : "";
  container.appendChild(
    el("p", "detail-source", `Source: ${src.title}. ${src.journal}${year}`.trim()),
  );
}

// ----------------------------------------------------------------- rag

export function renderRagResults(
  container: HTMLElement,
  results: EntryData[],
  onSelect: (entryId: string) => void,
): void {
  container.replaceChildren();
  const list = el("ol", "rag-list");
  for (const entry of results) {
    const item = el("li", "rag-item");
    item.dataset.entryId = entry.entry_id;
    const link = el("a", "rag-name", entry.card.Data_Name);
    link.href = "#";
    link.addEventListener("click", (ev) => {
      ev.preventDefault();
      onSelect(entry.entry_id);
    });
    item.appendChild(link);
    item.appendChild(el("p", "rag-summary", entry.card.Data_summary));
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderError(container: HTMLElement, message: string, retryable: boolean): void {
  container.replaceChildren();
  const banner = el("div", "error-banner", message);
  if (retryable) banner.appendChild(el("button", "retry-button", "retry"));
  container.appendChild(banner);
}
