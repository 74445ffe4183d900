/** Fenced config block extraction.
 *
 * The environment asks for designs as a fenced ```python block containing
 * `config = {...}`. When a completion holds several fenced blocks, the first
 * one with a config assignment wins; blocks without one are skipped.
 */

const FENCE = /```(?:python)?[ \t]*\n([\s\S]*?)```/g;
const CONFIG_ASSIGN = /config\s*=\s*/;

export function extractFirstConfigBlock(text: string): string | null {
  for (const match of text.matchAll(FENCE)) {
    const block = match[1];
    const assign = CONFIG_ASSIGN.exec(block);
    if (assign) {
      return block.slice(assign.index).trimEnd();
    }
  }
  return null;
}
