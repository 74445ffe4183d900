import { z } from "zod";

/** One prior attempt as the harness relays it: the agent's full raw output
 * and the rendered feedback report. */
export const HistoryEntrySchema = z.object({
  raw_text: z.string(),
  feedback: z.string(),
});
export type HistoryEntry = z.infer<typeof HistoryEntrySchema>;

/** A turn message from the harness (stdio line or HTTP POST body). */
export const TurnMessageSchema = z.object({
  type: z.literal("turn"),
  index: z.number().int().nonnegative(),
  brief: z.string(),
  history: z.array(HistoryEntrySchema),
});
export type TurnMessage = z.infer<typeof TurnMessageSchema>;

export const EndMessageSchema = z.object({ type: z.literal("end") });

export const HarnessMessageSchema = z.union([TurnMessageSchema, EndMessageSchema]);

/** The single response line/body the harness expects. */
export interface TurnResponse {
  raw_text: string;
}

export interface AgentConfig {
  /** Chat-completions base URL, e.g. http://127.0.0.1:8080/v1 */
  endpoint: string;
  model: string;
  /** Name of the environment variable holding the bearer token. */
  authEnv: string;
  temperature: number;
  /** Retries after the first attempt fails (0 = single attempt). */
  maxRetries: number;
  /** Base backoff delay in ms, doubled per retry. */
  backoffMs: number;
  transport: "stdio" | "http";
  /** Port for the http transport. */
  port: number;
  /** JSONL file receiving one TurnRecord per turn; empty disables logging. */
  logPath: string;
}

export const DEFAULT_CONFIG: AgentConfig = {
  endpoint: "http://127.0.0.1:8080/v1",
  model: "local-model",
  authEnv: "BRIDGE_API_KEY",
  temperature: 0.7,
  maxRetries: 2,
  backoffMs: 250,
  transport: "stdio",
  port: 8765,
  logPath: "turn_records.jsonl",
};

export interface ChatMessage {
  role: "user" | "assistant";
  content: string;
}

/** Local audit record for one turn. The prompt is stored verbatim so the
 * byte-faithful relay of brief and history is checkable after the fact. */
export interface TurnRecord {
  index: number;
  prompt: ChatMessage[];
  rawCompletion: string;
  /** Present exactly when a fenced config block was found. */
  extractedConfig: string | null;
  parseStatus: "extracted" | "no_config_block" | "gave_up";
}

/** Minimal chat-completions response shape (vendor-neutral). */
export const ChatCompletionResponseSchema = z.object({
  choices: z
    .array(
      z.object({
        message: z.object({ content: z.string().nullable() }),
      }),
    )
    .min(1),
});
