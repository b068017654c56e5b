/** The portal's acceptance path: a search URL renders the seeded card
 * first, reloading that URL reproduces the identical view, and the rag
 * panel displays nothing the API did not return. */

import { afterEach, describe, expect, it, vi } from "vitest";

import { ragQuery, searchDatasets } from "../src/api.js";
import { decodeState, encodeState, defaultState } from "../src/state.js";
import { renderRagResults, renderResults } from "../src/render.js";
import { SEARCH_RESPONSE, WALK_ENTRY } from "./fixtures.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

/** One full view pass exactly as the app performs it: URL -> state ->
 * API call -> DOM. */
async function renderFromUrl(url: string): Promise<string> {
  const state = decodeState(new URLSearchParams(url));
  const container = document.createElement("div");
  const response = await searchDatasets("", state);
  renderResults(container, response, () => undefined);
  return container.innerHTML;
}

describe("URL round trip", () => {
  it("walkability + country=US renders the seeded card first and reloads identically", async () => {
    const fetchMock = vi.fn(async () => new Response(JSON.stringify(SEARCH_RESPONSE)));
    vi.stubGlobal("fetch", fetchMock);

    const state = { ...defaultState(), q: "walkability", countries: ["US"] };
    const url = encodeState(state).toString();
    expect(url).toBe("q=walkability&country=US");

    const first = await renderFromUrl(url);
    expect(first).toContain("Walk Score walkability scores");
    const firstName = new DOMParser()
      .parseFromString(first, "text/html")
      .querySelector(".result-name");
    expect(firstName?.textContent).toBe("Walk Score walkability scores");

    // "reload": decode the same URL again with the same API state
    const second = await renderFromUrl(url);
    expect(second).toBe(first);

    // both passes sent the identical request
    const urls = fetchMock.mock.calls.map((c) => c[0]);
    expect(urls[0]).toBe(urls[1]);
    const params = new URLSearchParams((urls[0] as string).split("?")[1]);
    expect(params.get("q")).toBe("walkability");
    expect(params.getAll("country")).toEqual(["US"]);
  });

  it("rag panel displays only entries present in the API response", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response(JSON.stringify({ results: [WALK_ENTRY] }))),
    );
    const response = await ragQuery("", "pedestrian friendliness of US cities", 5);
    const container = document.createElement("div");
    renderRagResults(container, response.results, () => undefined);

    const rendered = Array.from(container.querySelectorAll(".rag-item")).map(
      (n) => (n as HTMLElement).dataset.entryId,
    );
    expect(rendered).toEqual(response.results.map((e) => e.entry_id));
  });
});
