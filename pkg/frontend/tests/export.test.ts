import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { downloadPatchingCsv } from "../src/exporter.js";

const CSV_BYTES = new TextEncoder().encode(
  "route,direction,lane,dmi\nI-65,NB,DL,0\nI-65,NB,DL,1\n",
);

function csvFetch(recorded: URL[]): typeof fetch {
  return (async (input: RequestInfo | URL) => {
    recorded.push(new URL(String(input)));
    return new Response(CSV_BYTES.slice().buffer as ArrayBuffer, {
      status: 200,
      headers: {
        "content-type": "text/csv",
        "content-disposition": 'attachment; filename="I-65-NB-DL-patching.csv"',
      },
    });
  }) as typeof fetch;
}

describe("downloadPatchingCsv", () => {
  it("saves the service bytes verbatim", async () => {
    const urls: URL[] = [];
    const api = new ApiClient("http://api.test", csvFetch(urls));
    const save = vi.fn();

    const result = await downloadPatchingCsv(api, "I-65", { lane: "DL" }, save);

    expect(save).toHaveBeenCalledTimes(1);
    const [bytes, filename] = save.mock.calls[0]! as [Uint8Array, string];
    expect(Array.from(bytes)).toEqual(Array.from(CSV_BYTES));
    expect(filename).toBe("I-65-NB-DL-patching.csv");
    expect(Array.from(result.bytes)).toEqual(Array.from(CSV_BYTES));
    expect(urls[0]!.pathname).toBe("/roads/I-65/patching.csv");
    expect(urls[0]!.searchParams.get("lane")).toBe("DL");
  });

  it("falls back to a generic filename without a disposition header", async () => {
    const fetchFn = (async () =>
      new Response(CSV_BYTES.slice().buffer as ArrayBuffer, { status: 200 })
    ) as typeof fetch;
    const api = new ApiClient("http://api.test", fetchFn);
    const save = vi.fn();
    const result = await downloadPatchingCsv(api, "I-65", {}, save);
    expect(result.filename).toBe("patching.csv");
  });

  it("surfaces service errors instead of saving anything", async () => {
    const fetchFn = (async () =>
      new Response(JSON.stringify({ detail: "no segments for I-99" }), {
        status: 404,
        headers: { "content-type": "application/json" },
      })) as typeof fetch;
    const api = new ApiClient("http://api.test", fetchFn);
    const save = vi.fn();
    await expect(downloadPatchingCsv(api, "I-99", {}, save))
      .rejects.toThrow("no segments for I-99");
    expect(save).not.toHaveBeenCalled();
  });
});
