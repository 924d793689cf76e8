import { describe, expect, it } from "vitest";

import { decodePng, decodePpm, isAllWhite } from "../src/png.js";
import { encodePng, texturedPixels, whitePixels } from "./helpers.js";

describe("image decoding", () => {
  it("round-trips an RGB PNG", () => {
    const pixels = texturedPixels(7, 5, "png-roundtrip");
    const decoded = decodePng(encodePng(7, 5, pixels));
    expect(decoded.width).toBe(7);
    expect(decoded.height).toBe(5);
    expect(decoded.pixels).toEqual(pixels);
  });

  it("detects a blank white canvas", () => {
    expect(isAllWhite(decodePng(encodePng(4, 4, whitePixels(4, 4))))).toBe(true);
    expect(isAllWhite(decodePng(encodePng(4, 4, texturedPixels(4, 4, "x"))))).toBe(false);
  });

  it("parses binary PPM", () => {
    const pixels = texturedPixels(3, 2, "ppm");
    const header = Buffer.from("P6\n# comment\n3 2\n255\n", "latin1");
    const decoded = decodePpm(Buffer.concat([header, Buffer.from(pixels)]));
    expect(decoded.width).toBe(3);
    expect(decoded.height).toBe(2);
    expect(decoded.pixels).toEqual(pixels);
  });

  it("rejects non-PNG data", () => {
    expect(() => decodePng(Buffer.from("definitely not a png"))).toThrow();
  });
});
