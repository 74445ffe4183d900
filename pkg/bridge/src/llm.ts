import {
  ChatCompletionResponseSchema,
  type AgentConfig,
  type ChatMessage,
} from "./types.js";

export class LlmUnavailableError extends Error {}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

function isRetriableStatus(status: number): boolean {
  return status === 429 || (status >= 500 && status < 600);
}

/** Chat-completions client with exponential backoff.
 *
 * Any OpenAI-compatible server works; only the base URL, model name, and a
 * bearer token read from the environment are assumed. Network errors, 429,
 * and 5xx responses are retried `maxRetries` times; anything else fails
 * immediately. After the last retry the caller receives
 * LlmUnavailableError and is expected to emit its give-up message.
 */
export async function chatComplete(
  config: AgentConfig,
  messages: ChatMessage[],
  doSleep: (ms: number) => Promise<unknown> = sleep,
): Promise<string> {
  const url = `${config.endpoint.replace(/\/$/, "")}/chat/completions`;
  const headers: Record<string, string> = { "Content-Type": "application/json" };
  const token = process.env[config.authEnv];
  if (token) {
    headers.Authorization = `Bearer ${token}`;
  }
  const body = JSON.stringify({
    model: config.model,
    messages,
    temperature: config.temperature,
  });

  let lastError: unknown;
  for (let attempt = 0; attempt <= config.maxRetries; attempt++) {
    if (attempt > 0) {
      await doSleep(config.backoffMs * 2 ** (attempt - 1));
    }
    try {
      const response = await fetch(url, { method: "POST", headers, body });
      if (!response.ok) {
        const detail = await response.text().catch(() => "");
        lastError = new Error(`HTTP ${response.status}: ${detail.slice(0, 200)}`);
        if (!isRetriableStatus(response.status)) {
          break;
        }
        continue;
      }
      const payload = ChatCompletionResponseSchema.parse(await response.json());
      return payload.choices[0]!.message.content ?? "";
    } catch (error) {
      if (error instanceof SyntaxError || (error as Error).name === "ZodError") {
        lastError = error;
        break; // malformed response body: retrying will not help
      }
      lastError = error; // network-level failure: retry
    }
  }
  throw new LlmUnavailableError(
    `endpoint ${url} failed after ${config.maxRetries + 1} attempts: ${String(lastError)}`,
  );
}
