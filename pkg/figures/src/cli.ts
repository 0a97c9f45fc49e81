/**
 * Usage: node dist/cli.js <figure|all> <resultsDir> <outDir>
 *
 * Renders one named figure (or all five) from the simulator's result files.
 */

import { FIGURE_IDS, renderFigure, type FigureId } from "./figures.js";

function main(argv: string[]): number {
  const [which, resultsDir, outDir] = argv;
  if (!which || !resultsDir || !outDir) {
    console.error("usage: cli.js <figure|all> <resultsDir> <outDir>");
    console.error(`figures: ${FIGURE_IDS.join(", ")}, all`);
    return 2;
  }
  const ids: FigureId[] =
    which === "all"
      ? [...FIGURE_IDS]
      : FIGURE_IDS.includes(which as FigureId)
        ? [which as FigureId]
        : [];
  if (ids.length === 0) {
    console.error(`unknown figure '${which}' (have: ${FIGURE_IDS.join(", ")})`);
    return 2;
  }
  for (const id of ids) {
    const out = renderFigure(id, resultsDir, outDir);
    console.log(`wrote ${out}`);
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
