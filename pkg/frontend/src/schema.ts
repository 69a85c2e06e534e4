/**
 * Schema-1 interchange records, mirroring the Python toolkit's loaders.
 * One JSON object per line, one line per frame, frames unique and ascending.
 */

import { z } from 'zod';

export const SCHEMA_VERSION = 1;
export const NUM_KEYPOINTS = 17;

const keypointTriplet = z.tuple([
  z.number(), // x
  z.number(), // y
  z.number().min(0).max(1), // confidence; 0 marks an absent keypoint
]);

export const poseRecordSchema = z.object({
  schema: z.literal(SCHEMA_VERSION),
  frame: z.number().int().nonnegative(),
  poses: z.array(
    z.object({
      keypoints: z.array(keypointTriplet).length(NUM_KEYPOINTS),
    }),
  ),
});

export const detectionRecordSchema = z.object({
  schema: z.literal(SCHEMA_VERSION),
  frame: z.number().int().nonnegative(),
  boxes: z.array(
    z
      .object({
        x1: z.number(),
        y1: z.number(),
        x2: z.number(),
        y2: z.number(),
        confidence: z.number().min(0).max(1),
        source: z.enum(['face', 'head']),
        track_id: z.number().int().optional(),
      })
      .refine((b) => b.x1 <= b.x2 && b.y1 <= b.y2, {
        message: 'box requires x1 <= x2 and y1 <= y2',
      }),
  ),
});

export type PoseRecord = z.infer<typeof poseRecordSchema>;
export type DetectionRecord = z.infer<typeof detectionRecordSchema>;

/** Serialize per-frame records as NDJSON text (trailing newline when non-empty). */
export function toNdjson(records: object[]): string {
  if (records.length === 0) return '';
  return records.map((r) => JSON.stringify(r)).join('\n') + '\n';
}

/** Parse and validate NDJSON text against a record schema. */
export function parseNdjson<T>(text: string, schema: z.ZodType<T>): T[] {
  const records: T[] = [];
  let lastFrame = -1;
  for (const [index, line] of text.split('\n').entries()) {
    if (!line.trim()) continue;
    const record = schema.parse(JSON.parse(line));
    const frame = (record as { frame: number }).frame;
    if (frame <= lastFrame) {
      throw new Error(`line ${index + 1}: frames must be unique and ascending`);
    }
    lastFrame = frame;
    records.push(record);
  }
  return records;
}
