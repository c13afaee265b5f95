import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { PreviewClient, PreviewResult } from "../src/api.js";
import { ServiceError } from "../src/api.js";
import { DEBOUNCE_MS, PreviewLoop, type Method } from "../src/preview.js";

function fakeResult(method: Method, tag: number): PreviewResult {
  return {
    status: "done",
    png: `png-${method}-${tag}`,
    metrics: {
      method,
      full: false,
      scale: 1,
      j1_u: 0.1,
      j1_v: 0.1,
      iterations: [5, 5],
      seconds: 0.01,
      collisions: 0,
    },
  };
}

class FakeClient {
  calls: Method[] = [];
  tag = 0;
  pending: Array<(r: PreviewResult) => void> = [];
  failWith: ServiceError | null = null;

  async requestPreview(_id: string, method: Method): Promise<PreviewResult> {
    this.calls.push(method);
    if (this.failWith) {
      throw this.failWith;
    }
    this.tag += 1;
    return fakeResult(method, this.tag);
  }
}

describe("PreviewLoop", () => {
  let client: FakeClient;
  let rendered: Array<{ png?: string; method: Method }>;
  let statuses: string[];
  let loop: PreviewLoop;

  beforeEach(() => {
    vi.useFakeTimers();
    client = new FakeClient();
    rendered = [];
    statuses = [];
    loop = new PreviewLoop(
      client as unknown as PreviewClient,
      "session",
      {
        render: (result, method) => rendered.push({ png: result.png, method }),
        status: (message) => statuses.push(message),
      },
    );
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces scribble edits for 500 ms", async () => {
    loop.scribblesChanged();
    loop.scribblesChanged();
    loop.scribblesChanged();
    expect(client.calls.length).toBe(0);
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS - 1);
    expect(client.calls.length).toBe(0);
    await vi.advanceTimersByTimeAsync(1);
    expect(client.calls.length).toBe(1);
    expect(rendered.length).toBe(1);
  });

  it("toggling with both methods cached makes no network request", async () => {
    loop.scribblesChanged();
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
    loop.setMethod("l2");
    await vi.advanceTimersByTimeAsync(0);
    expect(client.calls).toEqual(["l1", "l2"]);

    loop.setMethod("l1");
    loop.setMethod("l2");
    loop.setMethod("l1");
    await vi.advanceTimersByTimeAsync(0);
    expect(client.calls).toEqual(["l1", "l2"]); // cache hits only
    expect(rendered.length).toBe(5);
    expect(rendered.at(-1)?.method).toBe("l1");
  });

  it("scribble edits invalidate the cache", async () => {
    loop.scribblesChanged();
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
    expect(loop.hasCached("l1")).toBe(true);
    loop.scribblesChanged();
    expect(loop.hasCached("l1")).toBe(false);
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
    expect(client.calls).toEqual(["l1", "l1"]);
  });

  it("surfaces service error bodies verbatim in the status feed", async () => {
    client.failWith = new ServiceError(409, '{"detail":"no scribbles for this session"}');
    await loop.refresh();
    expect(statuses.at(-1)).toBe('{"detail":"no scribbles for this session"}');
  });
});
