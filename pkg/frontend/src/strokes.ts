/**
 * Brush strokes and their rasterization into the server's scribble schema.
 *
 * A stroke is an ordered polyline of canvas pixels plus a color and radius.
 * Rasterization stamps a disc at each point, walks the segments densely so
 * fast mouse moves leave no gaps, and resolves overlaps by letting later
 * strokes overwrite earlier ones at the same pixel.
 */

import { rgbToUv } from "./color.js";

export interface BrushStroke {
  /** ordered canvas pixel coordinates along the stroke path */
  points: { x: number; y: number }[];
  /** selected color, channels in [0, 1] */
  color: { r: number; g: number; b: number };
  /** brush radius in pixels, >= 1 */
  radius: number;
}

export interface ScribbleSite {
  x: number;
  y: number;
  u: number;
  v: number;
}

export interface ScribbleSet {
  exact: boolean;
  sites: ScribbleSite[];
}

export class EmptyStrokesError extends Error {
  constructor() {
    super("no strokes to rasterize");
  }
}

function validateStroke(s: BrushStroke, width: number, height: number): void {
  if (s.radius < 1) {
    throw new Error(`brush radius must be >= 1, got ${s.radius}`);
  }
  for (const p of s.points) {
    if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height) {
      throw new Error(`stroke point (${p.x}, ${p.y}) outside ${width}x${height}`);
    }
  }
}

/** Pixel indices (y * width + x) covered by one stroke. */
export function strokePixels(stroke: BrushStroke, width: number, height: number): Set<number> {
  const out = new Set<number>();
  const r = stroke.radius;
  const stamp = (cx: number, cy: number) => {
    const x0 = Math.max(0, Math.ceil(cx - r));
    const x1 = Math.min(width - 1, Math.floor(cx + r));
    const y0 = Math.max(0, Math.ceil(cy - r));
    const y1 = Math.min(height - 1, Math.floor(cy + r));
    for (let y = y0; y <= y1; y++) {
      for (let x = x0; x <= x1; x++) {
        const dx = x - cx;
        const dy = y - cy;
        if (dx * dx + dy * dy <= r * r) {
          out.add(y * width + x);
        }
      }
    }
  };
  const pts = stroke.points;
  if (pts.length === 0) {
    return out;
  }
  stamp(pts[0]!.x, pts[0]!.y);
  for (let i = 1; i < pts.length; i++) {
    const a = pts[i - 1]!;
    const b = pts[i]!;
    const steps = Math.max(1, Math.ceil(Math.hypot(b.x - a.x, b.y - a.y)));
    for (let s = 1; s <= steps; s++) {
      const t = s / steps;
      stamp(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
    }
  }
  return out;
}

/**
 * Rasterize a stroke stack into the scribble JSON the service accepts.
 * Later strokes win where they overlap earlier ones.
 */
export function strokesToScribbles(
  strokes: BrushStroke[],
  width: number,
  height: number,
  exact = true,
): ScribbleSet {
  if (strokes.length === 0) {
    throw new EmptyStrokesError();
  }
  const byPixel = new Map<number, ScribbleSite>();
  for (const stroke of strokes) {
    validateStroke(stroke, width, height);
    const { u, v } = rgbToUv(stroke.color.r, stroke.color.g, stroke.color.b);
    for (const idx of strokePixels(stroke, width, height)) {
      byPixel.set(idx, { x: idx % width, y: Math.floor(idx / width), u, v });
    }
  }
  const sites = [...byPixel.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([, site]) => site);
  return { exact, sites };
}

/**
 * Pixels that disappear when the last stroke is undone: exactly those the
 * last stroke claims and no earlier stroke also covers. (The UI simply
 * re-rasterizes the remaining stack, which has the same effect.)
 */
export function undoRemovedPixels(
  strokes: BrushStroke[],
  width: number,
  height: number,
): Set<number> {
  if (strokes.length === 0) {
    return new Set();
  }
  const last = strokePixels(strokes[strokes.length - 1]!, width, height);
  for (const earlier of strokes.slice(0, -1)) {
    for (const idx of strokePixels(earlier, width, height)) {
      last.delete(idx);
    }
  }
  return last;
}
