import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { thresholdQuery } from "../src/api.js";
import { SegmentsViewStore, debounce, isValidBand } from "../src/state.js";
import { makeResponse, makeSegment } from "./fixtures.js";

describe("isValidBand", () => {
  it("accepts strictly ordered finite bands", () => {
    expect(isValidBand({ lower: 149.1, upper: 214.9 })).toBe(true);
    expect(isValidBand({ lower: -1, upper: 0 })).toBe(true);
  });

  it("rejects inverted, equal and non-finite bands", () => {
    expect(isValidBand({ lower: 215, upper: 149 })).toBe(false);
    expect(isValidBand({ lower: 5, upper: 5 })).toBe(false);
    expect(isValidBand({ lower: NaN, upper: 1 })).toBe(false);
    expect(isValidBand({ lower: 0, upper: Infinity })).toBe(false);
  });
});

describe("thresholdQuery", () => {
  it("renders the service's query syntax", () => {
    expect(thresholdQuery({
      d0: { lower: 150, upper: 215 },
      iri: { lower: 1.5, upper: 2 },
    })).toBe("d0:150:215,iri:1.5:2");
  });

  it("is undefined with no overrides, so the param is omitted", () => {
    expect(thresholdQuery({})).toBeUndefined();
  });
});

describe("SegmentsViewStore", () => {
  it("installs responses and notifies subscribers", async () => {
    const store = new SegmentsViewStore();
    const seen: number[] = [];
    store.subscribe((view) => seen.push(view.segments.length));
    const response = makeResponse([makeSegment({ dmi: 0 })]);
    const result = await store.refresh(async () => response);
    expect(result).toBe(response);
    expect(store.current).toBe(response);
    expect(seen).toEqual([1]);
  });

  it("last refresh wins regardless of response arrival order", async () => {
    const store = new SegmentsViewStore();
    const slowResponse = makeResponse([makeSegment({ dmi: 0 })]);
    const fastResponse = makeResponse([makeSegment({ dmi: 0 }), makeSegment({ dmi: 1 })]);

    let releaseSlow!: () => void;
    const gate = new Promise<void>((resolve) => { releaseSlow = resolve; });

    const slowDone = store.refresh(async () => {
      await gate;
      return slowResponse;
    });
    const fastDone = store.refresh(async () => fastResponse);

    expect(await fastDone).toBe(fastResponse);
    releaseSlow();
    expect(await slowDone).toBeNull(); // superseded, discarded
    expect(store.current).toBe(fastResponse);
  });
});

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into the final call", () => {
    const fn = vi.fn();
    const d = debounce(fn, 100);
    d(1);
    d(2);
    d(3);
    vi.advanceTimersByTime(99);
    expect(fn).not.toHaveBeenCalled();
    vi.advanceTimersByTime(1);
    expect(fn).toHaveBeenCalledTimes(1);
    expect(fn).toHaveBeenCalledWith(3);
  });

  it("cancel drops the pending call", () => {
    const fn = vi.fn();
    const d = debounce(fn, 100);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(200);
    expect(fn).not.toHaveBeenCalled();
  });
});
