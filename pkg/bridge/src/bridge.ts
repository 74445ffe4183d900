import fs from "node:fs";
import path from "node:path";

import { extractFirstConfigBlock } from "./extract.js";
import { chatComplete, LlmUnavailableError } from "./llm.js";
import { buildMessages } from "./prompt.js";
import type { AgentConfig, TurnMessage, TurnRecord, TurnResponse } from "./types.js";

export class TurnRecordLog {
  constructor(private readonly filePath: string) {}

  append(record: TurnRecord): void {
    if (!this.filePath) return;
    fs.mkdirSync(path.dirname(path.resolve(this.filePath)), { recursive: true });
    fs.appendFileSync(this.filePath, JSON.stringify(record) + "\n");
  }
}

/** Handle one harness turn end to end: relay the brief and full history to
 * the model, log the audit record, and hand the completion back untouched.
 *
 * The raw completion is returned even when a config block was found - the
 * harness stores the full output (reasoning included) in its transcript and
 * runs its own parser. Extraction here feeds the audit log's parse status.
 * If the endpoint stays down through every retry, an explicit give-up
 * message is returned so the harness records a zero-reward attempt.
 */
export async function handleTurn(
  config: AgentConfig,
  message: TurnMessage,
  log: TurnRecordLog,
): Promise<TurnResponse> {
  const messages = buildMessages(message.brief, message.history);
  let rawCompletion: string;
  try {
    rawCompletion = await chatComplete(config, messages);
  } catch (error) {
    if (error instanceof LlmUnavailableError) {
      const giveUp = `ERROR: giving up this attempt; ${error.message}`;
      log.append({
        index: message.index,
        prompt: messages,
        rawCompletion: giveUp,
        extractedConfig: null,
        parseStatus: "gave_up",
      });
      return { raw_text: giveUp };
    }
    throw error;
  }
  const extracted = extractFirstConfigBlock(rawCompletion);
  log.append({
    index: message.index,
    prompt: messages,
    rawCompletion,
    extractedConfig: extracted,
    parseStatus: extracted !== null ? "extracted" : "no_config_block",
  });
  return { raw_text: rawCompletion };
}
