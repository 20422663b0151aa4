import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { makeThresholds } from "./fixtures.js";

function jsonFetch(recorded: { url?: URL; init?: RequestInit },
                   payload: unknown, status = 200): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    recorded.url = new URL(String(input));
    recorded.init = init;
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
}

describe("ApiClient", () => {
  it("builds road queries with only the provided parameters", async () => {
    const rec: { url?: URL } = {};
    const api = new ApiClient("http://api.test",
      jsonFetch(rec, { segments: [], summary: {}, thresholds: makeThresholds() }));
    await api.getSegments("I-65", { lane: "DL", thresholds: "d0:150:215" });
    expect(rec.url!.pathname).toBe("/roads/I-65/segments");
    expect(rec.url!.searchParams.get("lane")).toBe("DL");
    expect(rec.url!.searchParams.get("thresholds")).toBe("d0:150:215");
    expect(rec.url!.searchParams.has("direction")).toBe(false);
  });

  it("sends derive requests as JSON with the optional pair", async () => {
    const rec: { url?: URL; init?: RequestInit } = {};
    const api = new ApiClient("http://api.test", jsonFetch(rec, makeThresholds("derived")));
    await api.deriveThresholds("abc123", [80, 85]);
    expect(rec.url!.pathname).toBe("/thresholds/derive");
    expect(rec.init!.method).toBe("POST");
    expect(JSON.parse(String(rec.init!.body))).toEqual({
      dataset_id: "abc123",
      pair: [80, 85],
    });
  });

  it("raises ApiError carrying the service detail", async () => {
    const rec = {};
    const api = new ApiClient("http://api.test",
      jsonFetch(rec, { detail: "no such dataset: zz" }, 404));
    const err = await api.getThresholds("interstate").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.message).toBe("no such dataset: zz");
  });

  it("percent-encodes route ids in paths", async () => {
    const rec: { url?: URL } = {};
    const api = new ApiClient("http://api.test", jsonFetch(rec, { n: 0, counts: [], edges: [] }));
    await api.getHistogram("SR 37", "d0", { bins: 5 });
    expect(rec.url!.pathname).toBe("/roads/SR%2037/histogram");
    expect(rec.url!.searchParams.get("bins")).toBe("5");
    expect(rec.url!.searchParams.get("parameter")).toBe("d0");
  });
});
