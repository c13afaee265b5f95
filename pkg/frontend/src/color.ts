/**
 * RGB -> chroma conversion, identical constants to the server (BT.601).
 *
 * The client converts stroke colors itself so the wire format is exactly
 * the server's scribble schema; shared/color_vectors.json pins both sides
 * to the same numbers.
 */

const WR = 0.299;
const WG = 0.587;
const WB = 0.114;
const KU = 0.492111;
const KV = 0.877283;

const clampChroma = (x: number): number => Math.min(0.5, Math.max(-0.5, x));

/** Chroma (u, v) of an RGB triple with channels in [0, 1]. */
export function rgbToUv(r: number, g: number, b: number): { u: number; v: number } {
  const y = WR * r + WG * g + WB * b;
  return {
    u: clampChroma(KU * (b - y)),
    v: clampChroma(KV * (r - y)),
  };
}

/** Luminance of an RGB triple, in [0, 1]. */
export function luminance(r: number, g: number, b: number): number {
  return WR * r + WG * g + WB * b;
}

/** Parse "#rrggbb" into [0, 1] channels. */
export function hexToRgb(hex: string): { r: number; g: number; b: number } {
  const m = /^#?([0-9a-f]{6})$/i.exec(hex);
  if (!m || m[1] === undefined) {
    throw new Error(`not a #rrggbb color: ${hex}`);
  }
  const n = parseInt(m[1], 16);
  return {
    r: ((n >> 16) & 0xff) / 255,
    g: ((n >> 8) & 0xff) / 255,
    b: (n & 0xff) / 255,
  };
}
