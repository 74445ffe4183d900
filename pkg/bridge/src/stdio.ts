import readline from "node:readline";

import { handleTurn, TurnRecordLog } from "./bridge.js";
import { HarnessMessageSchema, type AgentConfig } from "./types.js";

/** Newline-delimited JSON loop: one turn message in, one response line out.
 * Responses are written in turn order even if handling overlaps. */
export async function runStdio(config: AgentConfig): Promise<void> {
  const log = new TurnRecordLog(config.logPath);
  const lines = readline.createInterface({ input: process.stdin, terminal: false });
  for await (const line of lines) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    let message;
    try {
      message = HarnessMessageSchema.parse(JSON.parse(trimmed));
    } catch (error) {
      process.stderr.write(`bridge: bad harness message: ${String(error)}\n`);
      continue;
    }
    if (message.type === "end") {
      break;
    }
    const response = await handleTurn(config, message, log);
    process.stdout.write(JSON.stringify(response) + "\n");
  }
}
