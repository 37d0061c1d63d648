#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { MissingSeriesError } from "./figures.js";
import { render } from "./render.js";

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .usage("render --csv <path> --kind star|ring-fc --out <path> [--format png|svg] [--logy]")
    .option("csv", { type: "string", demandOption: true, describe: "Experiment records CSV" })
    .option("kind", {
      choices: ["star", "ring-fc"] as const,
      demandOption: true,
      describe: "Which preset figure the CSV feeds",
    })
    .option("out", { type: "string", demandOption: true, describe: "Output image path" })
    .option("format", { choices: ["png", "svg"] as const, describe: "Image format (default from --out extension)" })
    .option("logy", { type: "boolean", default: false, describe: "Log-scaled y axis" })
    .strict()
    .parse();

  const format = argv.format ?? (argv.out.toLowerCase().endsWith(".png") ? "png" : "svg");
  await render({ csv: argv.csv, kind: argv.kind, out: argv.out, format, logY: argv.logy });
  console.log(`wrote ${argv.out}`);
}

main().catch((err) => {
  if (err instanceof MissingSeriesError) {
    console.error(err.message);
  } else {
    console.error(`render failed: ${err instanceof Error ? err.message : err}`);
  }
  process.exit(1);
});
