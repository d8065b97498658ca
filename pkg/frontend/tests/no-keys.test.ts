import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

// The server withholds every answer-key field; the client must not even know
// their names, so stripping keys server-side cannot be compensated here.
const KEY_FIELD_PATTERN =
  /\b(correct_indices|forward_refs|backward_refs|answer_key|accepted|expected|tolerance)\b/;

describe("client bundle contains no answer-key vocabulary", () => {
  it("no source file names a key field", () => {
    const srcDir = join(__dirname, "..", "src");
    for (const name of readdirSync(srcDir)) {
      if (!name.endsWith(".ts")) {
        continue;
      }
      const text = readFileSync(join(srcDir, name), "utf-8");
      const match = text.match(KEY_FIELD_PATTERN);
      expect(match, `${name} mentions key field ${match?.[0]}`).toBeNull();
    }
  });
});
