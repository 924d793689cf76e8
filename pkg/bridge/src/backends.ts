/**
 * Backend interfaces and the deterministic synthetic implementations.
 *
 * A production deployment plugs a Grounded-SAM-style detector and a
 * diffusion editor's latent encoder in behind these interfaces; weight
 * loading and device handling live entirely inside the backend. The
 * synthetic backends are seeded and pixel-aware, so archives are
 * reproducible and a blank white canvas yields no detections.
 */

import { isAllWhite, RawImage } from "./png.js";
import { Rng } from "./prng.js";

export interface BridgeDetection {
  label: string;
  confidence: number;
  /** Row-major 0/1 mask, width * height entries. */
  mask: Uint8Array;
}

export interface DetectorBackend {
  readonly id: string;
  detect(image: RawImage, imageId: string, label: string): BridgeDetection[];
}

export interface EditorBackend {
  readonly id: string;
  readonly dim: number;
  readonly canvas: [number, number];
  extractLatent(prompt: string, seed: number): Float32Array;
}

export class BackendLoadError extends Error {}

export class SyntheticDetector implements DetectorBackend {
  readonly id = "synthetic";

  detect(image: RawImage, imageId: string, label: string): BridgeDetection[] {
    if (isAllWhite(image)) return [];
    const rng = new Rng(`detect:${imageId}:${label}`);
    const count = rng.int(1, 2);
    const detections: BridgeDetection[] = [];
    for (let k = 0; k < count; k++) {
      detections.push({
        label,
        confidence: Math.round((0.15 + 0.84 * rng.next()) * 1e6) / 1e6,
        mask: this.ellipse(image.width, image.height, rng),
      });
    }
    return detections;
  }

  private ellipse(width: number, height: number, rng: Rng): Uint8Array {
    const cx = (0.2 + 0.6 * rng.next()) * width;
    const cy = (0.2 + 0.6 * rng.next()) * height;
    const rx = Math.max(2, (0.08 + 0.17 * rng.next()) * width);
    const ry = Math.max(2, (0.08 + 0.17 * rng.next()) * height);
    const mask = new Uint8Array(width * height);
    for (let y = 0; y < height; y++) {
      for (let x = 0; x < width; x++) {
        const dx = (x - cx) / rx;
        const dy = (y - cy) / ry;
        if (dx * dx + dy * dy <= 1.0) mask[y * width + x] = 1;
      }
    }
    return mask;
  }
}

export class SyntheticLatentEditor implements EditorBackend {
  readonly id = "synthetic";
  readonly canvas: [number, number] = [512, 512];

  constructor(readonly dim: number = 128) {}

  extractLatent(prompt: string, seed: number): Float32Array {
    const rng = new Rng(`latent:${seed}:${prompt}`);
    const vector = new Float32Array(this.dim);
    for (let i = 0; i < this.dim; i++) {
      vector[i] = Math.fround(rng.normal());
    }
    return vector;
  }
}

export function loadDetector(name: string): DetectorBackend {
  if (name === "synthetic") return new SyntheticDetector();
  throw new BackendLoadError(`unknown detector backend: ${name}`);
}

export function loadEditor(name: string, dim: number): EditorBackend {
  if (name === "synthetic") return new SyntheticLatentEditor(dim);
  throw new BackendLoadError(`unknown editor backend: ${name}`);
}
