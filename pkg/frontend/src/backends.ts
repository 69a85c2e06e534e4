/**
 * Detector backends. A backend turns one image into COCO-ordered poses and
 * face boxes; the adapter handles files, frames and serialization.
 *
 * The `stub` backend synthesizes one centered person from the image
 * dimensions alone. It exists so pipelines and CI can exercise the full
 * export path deterministically on machines without model weights; wire a
 * real pose estimator or face detector in by implementing DetectorBackend.
 */

import type { ImageSize } from './image.js';
import { NUM_KEYPOINTS } from './schema.js';

export type KeypointTriplet = [number, number, number];

export interface FaceBox {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  confidence: number;
}

export interface DetectorBackend {
  name: string;
  poses(size: ImageSize): KeypointTriplet[][];
  faces(size: ImageSize): FaceBox[];
}

// COCO slots: 0 nose, 1/2 eyes, 3/4 ears, 5/6 shoulders, 7/8 elbows,
// 9/10 wrists, 11/12 hips, 13/14 knees, 15/16 ankles.
const STUB_LAYOUT: Array<[number, number, number, number]> = [
  [0.5, 0.18, 0, 0.95],
  [0.5, 0.16, -0.03, 0.9],
  [0.5, 0.16, 0.03, 0.9],
  [0.5, 0.18, -0.06, 0.7],
  [0.5, 0.18, 0.06, 0.7],
  [0.5, 0.32, -0.11, 0.9],
  [0.5, 0.32, 0.11, 0.9],
  [0.5, 0.43, -0.14, 0.8],
  [0.5, 0.43, 0.14, 0.8],
  [0.5, 0.53, -0.15, 0.75],
  [0.5, 0.53, 0.15, 0.75],
  [0.5, 0.55, -0.07, 0.85],
  [0.5, 0.55, 0.07, 0.85],
  [0.5, 0.74, -0.08, 0.8],
  [0.5, 0.74, 0.08, 0.8],
  [0.5, 0.92, -0.08, 0.7],
  [0.5, 0.92, 0.08, 0.7],
];

class StubBackend implements DetectorBackend {
  name = 'stub';

  poses({ width, height }: ImageSize): KeypointTriplet[][] {
    const kps: KeypointTriplet[] = STUB_LAYOUT.map(([fx, fy, dx, conf]) => [
      clamp((fx + dx) * width, 0, width),
      clamp(fy * height, 0, height),
      conf,
    ]);
    if (kps.length !== NUM_KEYPOINTS) throw new Error('stub layout drifted');
    return [kps];
  }

  faces({ width, height }: ImageSize): FaceBox[] {
    const cx = 0.5 * width;
    const cy = 0.18 * height;
    const hw = 0.07 * width;
    const hh = 0.09 * height;
    return [
      {
        x1: clamp(cx - hw, 0, width),
        y1: clamp(cy - hh, 0, height),
        x2: clamp(cx + hw, 0, width),
        y2: clamp(cy + hh, 0, height),
        confidence: 0.8,
      },
    ];
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(Math.max(v, lo), hi);
}

const BACKENDS: Record<string, () => DetectorBackend> = {
  stub: () => new StubBackend(),
};

export function createBackend(name: string): DetectorBackend {
  const factory = BACKENDS[name];
  if (!factory) {
    throw new Error(
      `unknown backend "${name}"; available: ${Object.keys(BACKENDS).join(', ')}`,
    );
  }
  return factory();
}
