/** Thin typed client for the preview service endpoints. */

import type { ScribbleSet } from "./strokes.js";

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
}

export interface PreviewMetrics {
  method: string;
  full: boolean;
  scale: number;
  j1_u: number;
  j1_v: number;
  iterations: [number, number];
  seconds: number;
  collisions: number;
}

export interface PreviewResult {
  status: string;
  png?: string; // base64 PNG
  metrics?: PreviewMetrics;
  request?: number;
  error?: string;
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    public body: string,
  ) {
    super(`service returned ${status}: ${body}`);
  }
}

async function expectOk(resp: Response): Promise<unknown> {
  const text = await resp.text();
  if (!resp.ok) {
    throw new ServiceError(resp.status, text);
  }
  return JSON.parse(text);
}

export class PreviewClient {
  constructor(private baseUrl: string) {}

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(`${this.baseUrl}/healthz`);
      return resp.ok;
    } catch {
      return false;
    }
  }

  async createSession(pngBase64: string): Promise<SessionInfo> {
    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ image: pngBase64 }),
    });
    return (await expectOk(resp)) as SessionInfo;
  }

  async putScribbles(sessionId: string, scribbles: ScribbleSet): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/scribbles`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(scribbles),
    });
    await expectOk(resp);
  }

  async requestPreview(
    sessionId: string,
    method: "l1" | "l2",
    full = false,
  ): Promise<PreviewResult> {
    const resp = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/preview?method=${method}&full=${full}`,
      { method: "POST" },
    );
    return (await expectOk(resp)) as PreviewResult;
  }

  async getResult(sessionId: string): Promise<PreviewResult> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/result`);
    return (await expectOk(resp)) as PreviewResult;
  }

  /** Poll until a full-resolution result lands (or the deadline passes). */
  async waitForFullResult(sessionId: string, timeoutMs = 120_000): Promise<PreviewResult> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const body = await this.getResult(sessionId);
      if (body.status === "failed") {
        return body;
      }
      if (body.status === "done" && body.metrics?.full) {
        return body;
      }
      if (Date.now() > deadline) {
        throw new Error("timed out waiting for the full-resolution result");
      }
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  }
}
