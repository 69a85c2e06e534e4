/**
 * Export poses and face boxes for an image directory as schema-1 NDJSON
 * consumed by the Python toolkit.
 */

import { readdirSync, statSync, writeFileSync } from 'node:fs';
import { basename, extname, join } from 'node:path';

import type { DetectorBackend } from './backends.js';
import { imageSize } from './image.js';
import {
  DetectionRecord,
  PoseRecord,
  SCHEMA_VERSION,
  detectionRecordSchema,
  poseRecordSchema,
  toNdjson,
} from './schema.js';

const IMAGE_EXTENSIONS = new Set(['.png', '.jpg', '.jpeg']);

export interface AdapterConfig {
  backend: DetectorBackend;
  minConfidence: number;
}

/** Sorted (frame, path) pairs: trailing integer in the stem, else position. */
export function listFrameImages(dir: string): Array<[number, string]> {
  if (!statSync(dir).isDirectory()) {
    throw new Error(`${dir} is not a directory`);
  }
  const files = readdirSync(dir)
    .filter((name) => IMAGE_EXTENSIONS.has(extname(name).toLowerCase()))
    .sort()
    .map((name) => join(dir, name));
  return files.map((path, position) => {
    const match = /(\d+)$/.exec(basename(path, extname(path)));
    return [match ? parseInt(match[1], 10) : position, path];
  });
}

export function exportPoses(dir: string, cfg: AdapterConfig): PoseRecord[] {
  return listFrameImages(dir).map(([frame, path]) => {
    const poses = cfg.backend
      .poses(imageSize(path))
      .filter((kps) => meanConfidence(kps) >= cfg.minConfidence)
      .map((kps) => ({ keypoints: kps }));
    return poseRecordSchema.parse({ schema: SCHEMA_VERSION, frame, poses });
  });
}

export function exportFaces(dir: string, cfg: AdapterConfig): DetectionRecord[] {
  return listFrameImages(dir).map(([frame, path]) => {
    const boxes = cfg.backend
      .faces(imageSize(path))
      .filter((box) => box.confidence >= cfg.minConfidence)
      .map((box) => ({ ...box, source: 'face' as const }));
    return detectionRecordSchema.parse({ schema: SCHEMA_VERSION, frame, boxes });
  });
}

export function writeRecords(records: object[], outPath: string): void {
  writeFileSync(outPath, toNdjson(records));
}

function meanConfidence(kps: Array<[number, number, number]>): number {
  const present = kps.filter(([, , c]) => c > 0);
  if (present.length === 0) return 0;
  return present.reduce((acc, [, , c]) => acc + c, 0) / present.length;
}
