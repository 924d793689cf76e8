/** Latent archive production from the engine's prompt grid. */

import fs from "node:fs";
import path from "node:path";

import { EditorBackend } from "./backends.js";

export interface LatentConfig {
  seed: number;
  outDir: string;
}

interface GridPrompt {
  prompt: string;
  attribute: string | null;
  object: string | null;
  categories: string[];
}

export interface LatentSummary {
  entries: number;
  errors: string[];
}

function slugify(prompt: string): string {
  return prompt.replace(/[^a-z0-9]+/gi, "_");
}

function latentBytes(vector: Float32Array): Buffer {
  const buffer = Buffer.alloc(vector.length * 4);
  for (let i = 0; i < vector.length; i++) {
    buffer.writeFloatLE(vector[i], i * 4);
  }
  return buffer;
}

export function extractLatents(
  gridPath: string,
  backend: EditorBackend,
  config: LatentConfig,
): LatentSummary {
  const grid = JSON.parse(fs.readFileSync(gridPath, "utf-8"));
  const prompts: GridPrompt[] = grid.prompts ?? [];
  const latentsDir = path.join(config.outDir, "latents");
  fs.mkdirSync(latentsDir, { recursive: true });

  const entries = [];
  const errors: string[] = [];
  for (const entry of prompts) {
    const relPath = path.join("latents", `${slugify(entry.prompt)}.f32`);
    try {
      const vector = backend.extractLatent(entry.prompt, config.seed);
      const target = path.join(config.outDir, relPath);
      const tmp = `${target}.tmp`;
      fs.writeFileSync(tmp, latentBytes(vector));
      fs.renameSync(tmp, target);
    } catch (err) {
      errors.push(`${entry.prompt}: ${(err as Error).message}`);
      continue;
    }
    entries.push({
      prompt: entry.prompt,
      attribute: entry.attribute ?? null,
      object: entry.object ?? null,
      categories: entry.categories ?? [],
      path: relPath,
    });
  }

  // Manifest committed last, after every latent file is in place.
  const manifest = {
    dim: backend.dim,
    editor: backend.id,
    seed: config.seed,
    canvas: grid.canvas ?? backend.canvas,
    errors,
    entries,
  };
  const manifestPath = path.join(config.outDir, "manifest.json");
  const tmp = `${manifestPath}.tmp`;
  fs.writeFileSync(tmp, JSON.stringify(manifest, null, 2));
  fs.renameSync(tmp, manifestPath);
  return { entries: entries.length, errors };
}
