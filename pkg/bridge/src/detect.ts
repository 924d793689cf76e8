/** Detection archive production: images + label queries -> manifest + RLE. */

import fs from "node:fs";
import path from "node:path";

import { DetectorBackend } from "./backends.js";
import { listImages, readImage } from "./images.js";
import { encodeRle, maskArea, maskBBox } from "./rle.js";

export interface DetectConfig {
  threshold: number;
  outDir: string;
}

interface DetectionRecord {
  label: string;
  confidence: number;
  bbox: [number, number, number, number];
  rle: number[];
}

interface ImageRecord {
  image_id: string;
  image: string;
  width: number;
  height: number;
  detections: DetectionRecord[];
}

export interface DetectSummary {
  images: number;
  detections: number;
  errors: string[];
}

function atomicWriteJson(filePath: string, payload: unknown): void {
  const tmp = `${filePath}.tmp`;
  fs.writeFileSync(tmp, JSON.stringify(payload, null, 2));
  fs.renameSync(tmp, filePath);
}

export function detectAndSegment(
  imagesDir: string,
  queriesPath: string,
  backend: DetectorBackend,
  config: DetectConfig,
): DetectSummary {
  const queries: Record<string, string[]> = JSON.parse(fs.readFileSync(queriesPath, "utf-8"));
  const records: ImageRecord[] = [];
  const errors: string[] = [];
  let totalDetections = 0;

  for (const { imageId, filePath } of listImages(imagesDir)) {
    let image;
    try {
      image = readImage(filePath);
    } catch (err) {
      errors.push(`${imageId}: ${(err as Error).message}`);
      continue;
    }
    const detections: DetectionRecord[] = [];
    for (const label of queries[imageId] ?? []) {
      for (const det of backend.detect(image, imageId, label)) {
        if (det.confidence < config.threshold || maskArea(det.mask) === 0) continue;
        detections.push({
          label: det.label,
          confidence: det.confidence,
          bbox: maskBBox(det.mask, image.width, image.height),
          rle: encodeRle(det.mask, image.width, image.height),
        });
        totalDetections++;
      }
    }
    records.push({
      image_id: imageId,
      image: path.basename(filePath),
      width: image.width,
      height: image.height,
      detections,
    });
  }

  fs.mkdirSync(config.outDir, { recursive: true });
  // Manifest written last so a partially-built archive never validates.
  atomicWriteJson(path.join(config.outDir, "manifest.json"), {
    detector: backend.id,
    threshold: config.threshold,
    errors,
    images: records,
  });
  return { images: records.length, detections: totalDetections, errors };
}
