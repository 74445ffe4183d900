import { describe, expect, it } from "vitest";

import { extractFirstConfigBlock } from "../src/extract.js";

const BLOCK_A = 'config = {\n    "motor_choice": "Pro75M1670",\n}';
const BLOCK_B = 'config = {\n    "motor_choice": "CesaroniK160",\n}';

describe("extractFirstConfigBlock", () => {
  it("extracts a python-tagged fenced config block", () => {
    const text = `Reasoning first.\n\`\`\`python\n${BLOCK_A}\n\`\`\`\nDone.`;
    expect(extractFirstConfigBlock(text)).toBe(BLOCK_A);
  });

  it("takes the first of two fenced blocks", () => {
    const text = `\`\`\`python\n${BLOCK_A}\n\`\`\`\nor maybe\n\`\`\`python\n${BLOCK_B}\n\`\`\``;
    expect(extractFirstConfigBlock(text)).toBe(BLOCK_A);
  });

  it("accepts untagged fences", () => {
    const text = `\`\`\`\n${BLOCK_A}\n\`\`\``;
    expect(extractFirstConfigBlock(text)).toBe(BLOCK_A);
  });

  it("skips fenced blocks without a config assignment", () => {
    const text = `\`\`\`python\nprint("hello")\n\`\`\`\n\`\`\`python\n${BLOCK_B}\n\`\`\``;
    expect(extractFirstConfigBlock(text)).toBe(BLOCK_B);
  });

  it("returns null when no block exists", () => {
    expect(extractFirstConfigBlock("just prose, no code")).toBeNull();
    expect(extractFirstConfigBlock("```python\nno assignment\n```")).toBeNull();
  });

  it("drops prose before the assignment inside the block", () => {
    const text = `\`\`\`python\n# comment line\nconfig = {"a": 1}\n\`\`\``;
    expect(extractFirstConfigBlock(text)).toBe('config = {"a": 1}');
  });
});
