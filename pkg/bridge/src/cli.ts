#!/usr/bin/env node
/** pixlens-bridge: emit detection and latent archives for the engine. */

import process from "node:process";
import { parseArgs } from "node:util";

import { BackendLoadError, loadDetector, loadEditor } from "./backends.js";
import { detectAndSegment } from "./detect.js";
import { extractLatents } from "./latents.js";

const EXIT_USAGE = 1;
const EXIT_BACKEND = 3;

const USAGE = `usage:
  pixlens-bridge detect --images <dir> --queries <file> --out <dir>
                        [--backend synthetic] [--threshold 0.1]
  pixlens-bridge latents --grid <file> --out <dir>
                         [--backend synthetic] [--seed 0] [--dim 128]
`;

function fail(message: string, code: number): never {
  process.stderr.write(`pixlens-bridge: ${message}\n`);
  process.exit(code);
}

function runDetect(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      images: { type: "string" },
      queries: { type: "string" },
      out: { type: "string" },
      backend: { type: "string", default: "synthetic" },
      threshold: { type: "string", default: "0.1" },
    },
  });
  if (!values.images || !values.queries || !values.out) {
    fail(`missing required flags\n${USAGE}`, EXIT_USAGE);
  }
  const threshold = Number(values.threshold);
  if (!(threshold >= 0 && threshold <= 1)) {
    fail(`threshold ${values.threshold} outside [0, 1]`, EXIT_USAGE);
  }
  let backend;
  try {
    backend = loadDetector(values.backend!);
  } catch (err) {
    if (err instanceof BackendLoadError) fail(err.message, EXIT_BACKEND);
    throw err;
  }
  const summary = detectAndSegment(values.images!, values.queries!, backend, {
    threshold,
    outDir: values.out!,
  });
  process.stdout.write(
    `wrote ${summary.images} image records, ${summary.detections} detections` +
      (summary.errors.length ? `, ${summary.errors.length} errors\n` : "\n"),
  );
}

function runLatents(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      grid: { type: "string" },
      out: { type: "string" },
      backend: { type: "string", default: "synthetic" },
      seed: { type: "string", default: "0" },
      dim: { type: "string", default: "128" },
    },
  });
  if (!values.grid || !values.out) {
    fail(`missing required flags\n${USAGE}`, EXIT_USAGE);
  }
  let backend;
  try {
    backend = loadEditor(values.backend!, Number(values.dim));
  } catch (err) {
    if (err instanceof BackendLoadError) fail(err.message, EXIT_BACKEND);
    throw err;
  }
  const summary = extractLatents(values.grid!, backend, {
    seed: Number(values.seed),
    outDir: values.out!,
  });
  process.stdout.write(
    `wrote ${summary.entries} latent entries` +
      (summary.errors.length ? `, ${summary.errors.length} errors\n` : "\n"),
  );
}

function main(): void {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === "detect") {
      runDetect(rest);
    } else if (command === "latents") {
      runLatents(rest);
    } else {
      fail(`unknown command ${command ?? "(none)"}\n${USAGE}`, EXIT_USAGE);
    }
  } catch (err) {
    if (err instanceof BackendLoadError) fail(err.message, EXIT_BACKEND);
    fail((err as Error).message, EXIT_USAGE);
  }
}

main();
