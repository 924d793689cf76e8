/** Filesystem entry point for the supported image formats. */

import fs from "node:fs";
import path from "node:path";

import { decodePng, decodePpm, RawImage } from "./png.js";

export const IMAGE_EXTENSIONS = [".png", ".ppm"];

export function readImage(filePath: string): RawImage {
  const data = fs.readFileSync(filePath);
  const ext = path.extname(filePath).toLowerCase();
  if (ext === ".png") return decodePng(data);
  if (ext === ".ppm") return decodePpm(data);
  throw new Error(`unsupported image format: ${filePath}`);
}

export function listImages(directory: string): { imageId: string; filePath: string }[] {
  return fs
    .readdirSync(directory)
    .filter((name) => IMAGE_EXTENSIONS.includes(path.extname(name).toLowerCase()))
    .sort()
    .map((name) => ({
      imageId: name.slice(0, name.length - path.extname(name).length),
      filePath: path.join(directory, name),
    }));
}
