import type { ChatMessage, HistoryEntry } from "./types.js";

/** Build the chat message list for one turn.
 *
 * The brief opens the conversation; every previous attempt follows as the
 * model's own full output (assistant turn) and its feedback report (user
 * turn). Content is relayed byte-for-byte - the bridge adds no prompt
 * engineering of its own.
 */
export function buildMessages(brief: string, history: HistoryEntry[]): ChatMessage[] {
  const messages: ChatMessage[] = [{ role: "user", content: brief }];
  for (const entry of history) {
    messages.push({ role: "assistant", content: entry.raw_text });
    messages.push({ role: "user", content: entry.feedback });
  }
  return messages;
}
