#!/usr/bin/env node
/**
 * headbox-adapter: export detector output as interchange JSON.
 *
 *   headbox-adapter poses --images frames/ --out poses.ndjson --backend stub
 *   headbox-adapter faces --images frames/ --out faces.ndjson --backend stub
 */

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { exportFaces, exportPoses, writeRecords } from './adapter.js';
import { createBackend } from './backends.js';

const sharedOptions = {
  images: {
    type: 'string' as const,
    demandOption: true,
    describe: 'directory of PNG/JPEG frames',
  },
  out: { type: 'string' as const, demandOption: true, describe: 'output NDJSON path' },
  backend: { type: 'string' as const, default: 'stub', describe: 'detector backend' },
  'min-confidence': {
    type: 'number' as const,
    default: 0,
    describe: 'drop results below this confidence',
  },
};

interface Args {
  images: string;
  out: string;
  backend: string;
  minConfidence: number;
}

function run(kind: 'poses' | 'faces', args: Args): void {
  try {
    const cfg = {
      backend: createBackend(args.backend),
      minConfidence: args.minConfidence,
    };
    const records =
      kind === 'poses' ? exportPoses(args.images, cfg) : exportFaces(args.images, cfg);
    writeRecords(records, args.out);
    const items = records.reduce(
      (acc, r) => acc + ('poses' in r ? r.poses.length : r.boxes.length),
      0,
    );
    console.log(`wrote ${args.out} (${records.length} frames, ${items} ${kind})`);
  } catch (err) {
    console.error(JSON.stringify({ error: 'adapter', message: (err as Error).message }));
    process.exit(1);
  }
}

void yargs(hideBin(process.argv))
  .scriptName('headbox-adapter')
  .command(
    'poses',
    'export body poses',
    (y) => y.options(sharedOptions),
    (argv) => run('poses', argv as unknown as Args),
  )
  .command(
    'faces',
    'export face boxes',
    (y) => y.options(sharedOptions),
    (argv) => run('faces', argv as unknown as Args),
  )
  .demandCommand(1)
  .strict()
  .fail((msg, err) => {
    console.error(JSON.stringify({ error: 'adapter', message: msg ?? err?.message }));
    process.exit(1);
  })
  .parse();
