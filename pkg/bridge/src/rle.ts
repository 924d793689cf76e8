/**
 * Column-major run-length mask codec matching the engine's archive format.
 *
 * Pixels are enumerated down columns (Fortran order); the first count is
 * the length of the initial run of zeros, so a mask whose first
 * column-major pixel is set starts with a 0 count.
 */

export function encodeRle(mask: Uint8Array, width: number, height: number): number[] {
  if (mask.length !== width * height) {
    throw new Error(`mask length ${mask.length} does not match ${width}x${height}`);
  }
  const counts: number[] = [];
  let current = 0;
  let run = 0;
  for (let x = 0; x < width; x++) {
    for (let y = 0; y < height; y++) {
      const bit = mask[y * width + x] ? 1 : 0;
      if (bit === current) {
        run++;
      } else {
        counts.push(run);
        current = bit;
        run = 1;
      }
    }
  }
  counts.push(run);
  return counts;
}

export function decodeRle(counts: number[], width: number, height: number): Uint8Array {
  const total = counts.reduce((sum, c) => sum + c, 0);
  if (total !== width * height || counts.some((c) => c < 0)) {
    throw new Error(`invalid run lengths for ${width}x${height}`);
  }
  const mask = new Uint8Array(width * height);
  let index = 0;
  let value = 0;
  for (const count of counts) {
    for (let k = 0; k < count; k++) {
      const y = index % height;
      const x = (index - y) / height;
      mask[y * width + x] = value;
      index++;
    }
    value = 1 - value;
  }
  return mask;
}

export function maskBBox(
  mask: Uint8Array,
  width: number,
  height: number,
): [number, number, number, number] {
  let x0 = width, y0 = height, x1 = -1, y1 = -1;
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      if (mask[y * width + x]) {
        if (x < x0) x0 = x;
        if (y < y0) y0 = y;
        if (x > x1) x1 = x;
        if (y > y1) y1 = y;
      }
    }
  }
  if (x1 < 0) throw new Error("bbox of an empty mask");
  return [x0, y0, x1, y1];
}

export function maskArea(mask: Uint8Array): number {
  let area = 0;
  for (const bit of mask) area += bit ? 1 : 0;
  return area;
}
