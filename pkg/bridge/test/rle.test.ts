import { describe, expect, it } from "vitest";

import { decodeRle, encodeRle, maskArea, maskBBox } from "../src/rle.js";
import { Rng } from "../src/prng.js";

describe("run-length codec", () => {
  it("encodes the documented format examples", () => {
    expect(encodeRle(new Uint8Array(4), 2, 2)).toEqual([4]);
    expect(encodeRle(new Uint8Array(4).fill(1), 2, 2)).toEqual([0, 4]);
    // row-major [[F,T],[T,F]] -> column-major F,T,T,F
    expect(encodeRle(new Uint8Array([0, 1, 1, 0]), 2, 2)).toEqual([1, 2, 1]);
  });

  it("round-trips random masks", () => {
    const rng = new Rng("rle-test");
    for (let trial = 0; trial < 100; trial++) {
      const width = rng.int(1, 12);
      const height = rng.int(1, 12);
      const mask = new Uint8Array(width * height);
      for (let i = 0; i < mask.length; i++) mask[i] = rng.next() < 0.5 ? 1 : 0;
      const counts = encodeRle(mask, width, height);
      expect(decodeRle(counts, width, height)).toEqual(mask);
      expect(counts.slice(1).every((c) => c > 0)).toBe(true);
    }
  });

  it("computes bbox and area", () => {
    const mask = new Uint8Array(5 * 4);
    mask[1 * 5 + 2] = 1;
    mask[3 * 5 + 4] = 1;
    expect(maskBBox(mask, 5, 4)).toEqual([2, 1, 4, 3]);
    expect(maskArea(mask)).toBe(2);
  });
});
