import { describe, expect, it } from "vitest";

import { decodeState, defaultState, encodeState, yearRangeError } from "../src/state.js";

describe("view state <-> URL", () => {
  it("round-trips a fully populated state", () => {
    const state = {
      ...defaultState(),
      view: "search" as const,
      q: "walkability",
      categories: ["Statistical infrastructure data"],
      countries: ["US"],
      yearFrom: 2010,
      yearTo: 2020,
      offset: 20,
    };
    const decoded = decodeState(encodeState(state));
    expect(decoded).toEqual(state);
  });

  it("round-trips detail and rag views", () => {
    const detail = { ...defaultState(), view: "detail" as const, entryId: "abc123" };
    expect(decodeState(encodeState(detail))).toEqual(detail);

    const rag = { ...defaultState(), view: "rag" as const, ragText: "bus data", ragK: 5 };
    expect(decodeState(encodeState(rag))).toEqual(rag);
  });

  it("an empty URL is the default state", () => {
    expect(decodeState(new URLSearchParams(""))).toEqual(defaultState());
    expect(encodeState(defaultState()).toString()).toBe("");
  });

  it("encoding is order-normalized so equal states share one URL", () => {
    const a = { ...defaultState(), countries: ["US", "CN"] };
    const b = { ...defaultState(), countries: ["CN", "US"] };
    expect(encodeState(a).toString()).toBe(encodeState(b).toString());
  });

  it("ignores junk numeric params", () => {
    const state = decodeState(new URLSearchParams("year_from=abc&offset=-5"));
    expect(state.yearFrom).toBeNull();
    expect(state.offset).toBe(0);
  });

  it("flags reversed year ranges for inline validation", () => {
    expect(yearRangeError({ ...defaultState(), yearFrom: 2020, yearTo: 2010 })).toBeTruthy();
    expect(yearRangeError({ ...defaultState(), yearFrom: 2010, yearTo: 2020 })).toBeNull();
    expect(yearRangeError(defaultState())).toBeNull();
  });
});
