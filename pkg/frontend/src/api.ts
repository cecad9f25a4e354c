/** Service client: plain JSON for replay queries, server-sent events with
 * progress frames for live fetches. At most one spectrum request is in
 * flight; a newer submission aborts the previous one.
 */

import type {
  ApiErrorBody,
  DiffusionResponse,
  ProgressEvent,
  QueryMode,
  SpectrumResponse,
  YearTopResponse,
} from "./types.js";

export class ApiError extends Error {
  body: ApiErrorBody;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.body = body;
  }
}

export interface SseFrame {
  event: string;
  data: string;
}

/** Split an SSE buffer into complete frames plus the unfinished remainder. */
export function parseSseFrames(buffer: string): { frames: SseFrame[]; rest: string } {
  const frames: SseFrame[] = [];
  const blocks = buffer.split("\n\n");
  const rest = blocks.pop() ?? "";
  for (const block of blocks) {
    let event = "message";
    const data: string[] = [];
    for (const line of block.split("\n")) {
      if (line.startsWith("event: ")) {
        event = line.slice("event: ".length);
      } else if (line.startsWith("data: ")) {
        data.push(line.slice("data: ".length));
      }
    }
    if (data.length > 0) {
      frames.push({ event, data: data.join("\n") });
    }
  }
  return { frames, rest };
}

async function readError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = { code: "internal", message: `HTTP ${response.status}` };
  }
  return new ApiError(body);
}

export class ApiClient {
  private base: string;
  private inFlight: AbortController | null = null;

  constructor(base = "") {
    this.base = base;
  }

  /** Cancel the in-flight spectrum request, if any. */
  cancel(): void {
    this.inFlight?.abort();
    this.inFlight = null;
  }

  async runSpectrum(
    mode: QueryMode,
    text: string,
    source: "live" | "replay",
    onProgress?: (p: ProgressEvent) => void,
  ): Promise<SpectrumResponse> {
    this.cancel();
    const controller = new AbortController();
    this.inFlight = controller;
    try {
      const response = await fetch(`${this.base}/api/spectrum`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ query: { mode, text }, source }),
        signal: controller.signal,
      });
      if (!response.ok) {
        throw await readError(response);
      }
      const contentType = response.headers.get("content-type") ?? "";
      if (!contentType.startsWith("text/event-stream")) {
        return (await response.json()) as SpectrumResponse;
      }
      return await this.consumeStream(response, onProgress);
    } finally {
      if (this.inFlight === controller) {
        this.inFlight = null;
      }
    }
  }

  private async consumeStream(
    response: Response,
    onProgress?: (p: ProgressEvent) => void,
  ): Promise<SpectrumResponse> {
    const reader = response.body?.getReader();
    if (!reader) {
      throw new ApiError({ code: "internal", message: "response body is not readable" });
    }
    const decoder = new TextDecoder();
    let buffer = "";
    let result: SpectrumResponse | null = null;
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      buffer += decoder.decode(value, { stream: true });
      const { frames, rest } = parseSseFrames(buffer);
      buffer = rest;
      for (const frame of frames) {
        if (frame.event === "progress" && onProgress) {
          onProgress(JSON.parse(frame.data) as ProgressEvent);
        } else if (frame.event === "result") {
          result = JSON.parse(frame.data) as SpectrumResponse;
        } else if (frame.event === "error") {
          throw new ApiError(JSON.parse(frame.data) as ApiErrorBody);
        }
      }
    }
    if (result === null) {
      throw new ApiError({ code: "internal", message: "stream ended without a result" });
    }
    return result;
  }

  async getDiffusion(patentId: string): Promise<DiffusionResponse> {
    const response = await fetch(
      `${this.base}/api/patents/${encodeURIComponent(patentId)}/diffusion`,
    );
    if (!response.ok) {
      throw await readError(response);
    }
    return (await response.json()) as DiffusionResponse;
  }

  async getYearTop(year: number, queryHash: string, limit = 25): Promise<YearTopResponse> {
    const params = new URLSearchParams({ query_hash: queryHash, limit: String(limit) });
    const response = await fetch(`${this.base}/api/years/${year}/top?${params}`);
    if (!response.ok) {
      throw await readError(response);
    }
    return (await response.json()) as YearTopResponse;
  }
}
