/**
 * Minimal image decoding: 8-bit non-interlaced PNG (gray, gray+alpha,
 * RGB, RGBA) and binary PPM (P6). Output is always packed RGB8.
 */

import zlib from "node:zlib";

export interface RawImage {
  width: number;
  height: number;
  /** Row-major RGB, 3 bytes per pixel. */
  pixels: Uint8Array;
}

const PNG_SIGNATURE = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);

const CHANNELS: Record<number, number> = { 0: 1, 2: 3, 4: 2, 6: 4 };

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

export function decodePng(data: Buffer): RawImage {
  if (!data.subarray(0, 8).equals(PNG_SIGNATURE)) {
    throw new Error("not a PNG file");
  }
  let width = 0;
  let height = 0;
  let bitDepth = 0;
  let colorType = 0;
  let interlace = 0;
  const idat: Buffer[] = [];

  let pos = 8;
  while (pos + 8 <= data.length) {
    const length = data.readUInt32BE(pos);
    const type = data.toString("latin1", pos + 4, pos + 8);
    const body = data.subarray(pos + 8, pos + 8 + length);
    if (type === "IHDR") {
      width = body.readUInt32BE(0);
      height = body.readUInt32BE(4);
      bitDepth = body[8];
      colorType = body[9];
      interlace = body[12];
    } else if (type === "IDAT") {
      idat.push(body);
    } else if (type === "IEND") {
      break;
    }
    pos += 12 + length;
  }

  if (bitDepth !== 8) throw new Error(`unsupported bit depth ${bitDepth}`);
  if (interlace !== 0) throw new Error("interlaced PNG is not supported");
  const channels = CHANNELS[colorType];
  if (!channels) throw new Error(`unsupported color type ${colorType}`);

  const raw = zlib.inflateSync(Buffer.concat(idat));
  const stride = width * channels;
  if (raw.length < height * (stride + 1)) throw new Error("truncated PNG data");

  const unfiltered = new Uint8Array(height * stride);
  for (let y = 0; y < height; y++) {
    const filter = raw[y * (stride + 1)];
    const rowIn = raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1));
    const rowOut = unfiltered.subarray(y * stride, (y + 1) * stride);
    const prev = y > 0 ? unfiltered.subarray((y - 1) * stride, y * stride) : null;
    for (let i = 0; i < stride; i++) {
      const left = i >= channels ? rowOut[i - channels] : 0;
      const up = prev ? prev[i] : 0;
      const upLeft = prev && i >= channels ? prev[i - channels] : 0;
      let value = rowIn[i];
      switch (filter) {
        case 0: break;
        case 1: value += left; break;
        case 2: value += up; break;
        case 3: value += (left + up) >> 1; break;
        case 4: value += paeth(left, up, upLeft); break;
        default: throw new Error(`unknown PNG filter ${filter}`);
      }
      rowOut[i] = value & 0xff;
    }
  }

  const pixels = new Uint8Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    const src = i * channels;
    if (channels === 1 || channels === 2) {
      pixels[i * 3] = pixels[i * 3 + 1] = pixels[i * 3 + 2] = unfiltered[src];
    } else {
      pixels[i * 3] = unfiltered[src];
      pixels[i * 3 + 1] = unfiltered[src + 1];
      pixels[i * 3 + 2] = unfiltered[src + 2];
    }
  }
  return { width, height, pixels };
}

export function decodePpm(data: Buffer): RawImage {
  let pos = 0;

  function token(): string {
    while (pos < data.length) {
      const ch = data[pos];
      if (ch === 0x23) {
        while (pos < data.length && data[pos] !== 0x0a) pos++;
      } else if (ch === 0x20 || ch === 0x09 || ch === 0x0a || ch === 0x0d) {
        pos++;
      } else {
        break;
      }
    }
    const start = pos;
    while (pos < data.length && ![0x20, 0x09, 0x0a, 0x0d].includes(data[pos])) pos++;
    return data.toString("latin1", start, pos);
  }

  if (token() !== "P6") throw new Error("not a binary PPM (P6) file");
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width > 0 && height > 0)) throw new Error("invalid PPM dimensions");
  if (maxval !== 255) throw new Error(`unsupported PPM maxval ${maxval}`);
  pos++; // single whitespace after maxval
  const pixels = data.subarray(pos, pos + width * height * 3);
  if (pixels.length < width * height * 3) throw new Error("truncated PPM data");
  return { width, height, pixels: new Uint8Array(pixels) };
}

export function isAllWhite(image: RawImage): boolean {
  return image.pixels.every((value) => value === 255);
}
