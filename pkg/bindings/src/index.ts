/** coditkit client: in-process TypeScript implementations of the toolkit's
 * core operations, parity-tested against the `coditkit` CLI's golden outputs.
 */

export const VERSION = "0.1.0";

export * from "./errors.js";
export * from "./tokens.js";
export * from "./edits.js";
export * from "./noising.js";
export * from "./metrics.js";
export * from "./tasks.js";
export * from "./rerank.js";
