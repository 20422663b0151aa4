/**
 * Patching-table download. The service's CSV bytes are streamed to the
 * user verbatim; the UI never parses or re-serializes them.
 */

import type { ApiClient, CsvDownload, RoadQuery } from "./api.js";

export type SaveFile = (bytes: Uint8Array, filename: string) => void;

function browserSave(bytes: Uint8Array, filename: string): void {
  const blob = new Blob([bytes as unknown as BlobPart], { type: "text/csv" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

export async function downloadPatchingCsv(
  api: ApiClient,
  route: string,
  query: RoadQuery = {},
  save: SaveFile = browserSave,
): Promise<CsvDownload> {
  const download = await api.fetchPatchingCsv(route, query);
  save(download.bytes, download.filename);
  return download;
}
