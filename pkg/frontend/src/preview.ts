/**
 * The place-scribbles -> preview -> refine loop.
 *
 * Scribble edits schedule a preview after 500 ms of inactivity. At most one
 * request is in flight; anything superseded is dropped when it returns
 * (newest wins, mirroring the service's per-session queue). Results are
 * cached per method until the scribbles change, so toggling L1/L2 after
 * both have been computed re-renders without touching the network.
 */

import type { PreviewClient, PreviewResult } from "./api.js";
import { ServiceError } from "./api.js";

export type Method = "l1" | "l2";

export interface LoopCallbacks {
  render: (result: PreviewResult, method: Method) => void;
  status: (message: string) => void;
}

export const DEBOUNCE_MS = 500;

export class PreviewLoop {
  private cache = new Map<Method, PreviewResult>();
  private requestSeq = 0;
  private appliedSeq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private method: Method = "l1";

  constructor(
    private client: PreviewClient,
    private sessionId: string,
    private callbacks: LoopCallbacks,
    private debounceMs: number = DEBOUNCE_MS,
  ) {}

  currentMethod(): Method {
    return this.method;
  }

  /** True when the current method's preview is cached (toggle is free). */
  hasCached(method: Method): boolean {
    return this.cache.has(method);
  }

  /** Scribbles changed: everything cached is stale; debounce a re-solve. */
  scribblesChanged(): void {
    this.cache.clear();
    this.requestSeq++; // orphan any in-flight request
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.refresh();
    }, this.debounceMs);
  }

  /** Method toggle: cache hit renders immediately, miss solves now. */
  setMethod(method: Method): void {
    this.method = method;
    const cached = this.cache.get(method);
    if (cached) {
      this.callbacks.render(cached, method);
      return;
    }
    void this.refresh();
  }

  /** Solve for the current method right away (also the debounce target). */
  async refresh(): Promise<void> {
    const seq = ++this.requestSeq;
    const method = this.method;
    this.callbacks.status(`solving ${method} preview…`);
    try {
      const result = await this.client.requestPreview(this.sessionId, method, false);
      if (seq !== this.requestSeq || seq <= this.appliedSeq) {
        return; // a newer request superseded this one
      }
      this.appliedSeq = seq;
      this.cache.set(method, result);
      this.callbacks.render(result, method);
      const m = result.metrics;
      this.callbacks.status(
        m ? `${method} preview in ${m.seconds.toFixed(2)}s ` +
            `(J1=${(m.j1_u + m.j1_v).toFixed(4)}, scale=${m.scale})`
          : `${method} preview ready`,
      );
    } catch (err) {
      if (seq !== this.requestSeq) {
        return;
      }
      // surface the service's own words
      this.callbacks.status(err instanceof ServiceError ? err.body : String(err));
    }
  }

  /** Kick off a full-resolution solve and render it when it lands. */
  async requestFull(): Promise<void> {
    const method = this.method;
    this.callbacks.status(`full-resolution ${method} solve queued…`);
    try {
      await this.client.requestPreview(this.sessionId, method, true);
      const result = await this.client.waitForFullResult(this.sessionId);
      if (result.status === "failed") {
        this.callbacks.status(`full solve failed: ${result.error ?? "unknown"}`);
        return;
      }
      this.callbacks.render(result, method);
      this.callbacks.status(`full-resolution ${method} result ready`);
    } catch (err) {
      this.callbacks.status(err instanceof ServiceError ? err.body : String(err));
    }
  }
}
