import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { ThresholdExplorer } from "../src/explorer.js";
import { SegmentsViewStore } from "../src/state.js";
import { makeResponse, makeSegment, makeThresholds } from "./fixtures.js";

interface RecordedCall {
  method: string;
  url: URL;
  body: unknown;
}

/**
 * A fetch stub that records every request and answers from a small
 * in-memory service: segments vary with the thresholds query, PUT
 * installs an override that later GETs reflect.
 */
function fakeService() {
  const calls: RecordedCall[] = [];
  let storedThresholds = makeThresholds();

  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input));
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ method, url, body });

    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (url.pathname.endsWith("/segments")) {
      const whatIf = url.searchParams.get("thresholds");
      // tightened bands flip every marker; the specific decision keys
      // off the query so tests can tell responses apart
      const decision = whatIf === null
        ? "no_action"
        : whatIf === "d0:1:2" ? "full_depth_required" : "surface_required";
      const segments = [0, 1, 2].map((i) =>
        decision === "no_action"
          ? makeSegment({ dmi: i })
          : makeSegment({ dmi: i, decision, triggers: ["d0"] }));
      return json(makeResponse(segments, storedThresholds));
    }
    if (url.pathname.includes("/thresholds/") && method === "PUT") {
      storedThresholds = {
        ...storedThresholds,
        provenance: "user_override",
        bands: {
          ...storedThresholds.bands,
          ...Object.fromEntries(
            Object.entries(body.bands as Record<string, [number, number]>).map(
              ([pid, [lower, upper]]) => [pid, { lower, upper }],
            ),
          ),
        },
      };
      return json(storedThresholds);
    }
    if (url.pathname.includes("/thresholds/")) {
      return json(storedThresholds);
    }
    return json({ detail: `unexpected ${method} ${url.pathname}` }, 500);
  }) as typeof fetch;

  return { calls, fetchFn, stored: () => storedThresholds };
}

let service: ReturnType<typeof fakeService>;
let explorer: ThresholdExplorer;
let store: SegmentsViewStore;

beforeEach(() => {
  vi.useFakeTimers();
  service = fakeService();
  store = new SegmentsViewStore();
  explorer = new ThresholdExplorer(
    new ApiClient("http://api.test", service.fetchFn), store, 250);
});

afterEach(() => {
  vi.useRealTimers();
});

async function flushTimers(): Promise<void> {
  await vi.runAllTimersAsync();
}

describe("ThresholdExplorer", () => {
  it("issues only read requests while sliding", async () => {
    await explorer.load({ route: "I-65" });
    explorer.slide("d0", { lower: 100, upper: 120 });
    explorer.slide("d0", { lower: 100, upper: 118 });
    explorer.slide("iri", { lower: 1.0, upper: 1.2 });
    await flushTimers();

    expect(service.calls.length).toBeGreaterThan(1);
    for (const call of service.calls) {
      expect(call.method).toBe("GET");
    }
  });

  it("debounces a drag into a single refreshed query", async () => {
    await explorer.load({ route: "I-65" });
    const before = service.calls.length;
    for (let upper = 214; upper >= 205; upper--) {
      explorer.slide("d0", { lower: 149.1, upper });
    }
    await flushTimers();
    const segmentCalls = service.calls.slice(before)
      .filter((c) => c.url.pathname.endsWith("/segments"));
    expect(segmentCalls).toHaveLength(1);
    expect(segmentCalls[0]!.url.searchParams.get("thresholds"))
      .toBe("d0:149.1:205");
  });

  it("updates marker colors from the what-if response", async () => {
    const initial = await explorer.load({ route: "I-65" });
    expect(initial!.segments.map((s) => s.marker_color))
      .toEqual(["green", "green", "green"]);

    explorer.slide("d0", { lower: 50, upper: 60 });
    await flushTimers();
    expect(store.current!.segments.map((s) => s.marker_color))
      .toEqual(["yellow", "yellow", "yellow"]);
  });

  it("blocks inverted bands before any request", async () => {
    await explorer.load({ route: "I-65" });
    const before = service.calls.length;
    expect(explorer.slide("d0", { lower: 215, upper: 149 })).toBe(false);
    expect(explorer.slide("d0", { lower: 150, upper: 150 })).toBe(false);
    expect(explorer.slide("d0", { lower: NaN, upper: 200 })).toBe(false);
    await flushTimers();
    expect(service.calls.length).toBe(before);
  });

  it("reset returns the view to the initial load", async () => {
    const initial = await explorer.load({ route: "I-65" });
    explorer.slide("d0", { lower: 50, upper: 60 });
    await flushTimers();
    expect(store.current).not.toEqual(initial);

    explorer.reset();
    await flushTimers();
    expect(store.current).toEqual(initial);
    const last = service.calls[service.calls.length - 1]!;
    expect(last.url.searchParams.has("thresholds")).toBe(false);
  });

  it("save issues the PUT and the override is shown as current afterwards", async () => {
    await explorer.load({ route: "I-65" });
    explorer.slide("d0", { lower: 100, upper: 120 });
    await flushTimers();

    const stored = await explorer.save("interstate");
    expect(stored.provenance).toBe("user_override");
    expect(stored.bands["d0"]).toEqual({ lower: 100, upper: 120 });

    const puts = service.calls.filter((c) => c.method === "PUT");
    expect(puts).toHaveLength(1);
    expect(puts[0]!.body).toEqual({ bands: { d0: [100, 120] }, note: null });

    // a fresh client (reload) sees the override as the stored set
    const reloaded = await new ApiClient("http://api.test", service.fetchFn)
      .getThresholds("interstate");
    expect(reloaded.bands["d0"]).toEqual({ lower: 100, upper: 120 });
    expect(reloaded.provenance).toBe("user_override");
  });

  it("discards stale responses by sequence number", async () => {
    let release: (() => void) | null = null;
    const slow = new Promise<void>((resolve) => { release = resolve; });
    const slowFetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = new URL(String(input));
      if (url.searchParams.get("thresholds") === "d0:1:2") {
        await slow; // first what-if hangs until released
      }
      return service.fetchFn(input, init);
    }) as typeof fetch;
    const lagged = new ThresholdExplorer(
      new ApiClient("http://api.test", slowFetch), store, 0);

    await lagged.load({ route: "I-65" });
    lagged.slide("d0", { lower: 1, upper: 2 });
    await vi.advanceTimersByTimeAsync(1);
    lagged.slide("d0", { lower: 3, upper: 4 });
    await vi.advanceTimersByTimeAsync(1);

    release!();
    await flushTimers();
    // the d0:1:2 response arrived last (it was recorded last) but the
    // view keeps the later query's result
    const last = service.calls[service.calls.length - 1]!;
    expect(last.url.searchParams.get("thresholds")).toBe("d0:1:2");
    expect(store.current!.segments[0]!.decision).toBe("surface_required");
    expect(store.current!.segments[0]!.decision).not.toBe("full_depth_required");
  });
});
