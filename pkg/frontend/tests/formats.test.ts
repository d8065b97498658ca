import { Window } from "happy-dom";
import { beforeEach, describe, expect, it } from "vitest";

import { renderFormat } from "../src/formats.js";

let doc: Document;

beforeEach(() => {
  doc = new Window().document as unknown as Document;
});

function inputs(root: HTMLElement, selector: string): HTMLInputElement[] {
  return Array.from(root.querySelectorAll(selector)) as HTMLInputElement[];
}

describe("choice renderer", () => {
  it("single select requires exactly one pick", () => {
    const widget = renderFormat(
      { type: "choice", choices: ["a", "b", "c"], multi_select: false },
      doc,
    );
    expect(widget.read().ok).toBe(false);
    inputs(widget.root, "input")[1].checked = true;
    expect(widget.read()).toEqual({ ok: true, payload: { kind: "choice", indices: [1] } });
  });

  it("multi select permits any subset including empty", () => {
    const widget = renderFormat(
      { type: "choice", choices: ["a", "b", "c"], multi_select: true },
      doc,
    );
    expect(widget.read()).toEqual({ ok: true, payload: { kind: "choice", indices: [] } });
    const boxes = inputs(widget.root, "input");
    boxes[0].checked = true;
    boxes[2].checked = true;
    expect(widget.read()).toEqual({ ok: true, payload: { kind: "choice", indices: [0, 2] } });
  });
});

describe("true/false renderer", () => {
  it("requires a pick and maps to a boolean payload", () => {
    const widget = renderFormat({ type: "true_false" }, doc);
    expect(widget.read().ok).toBe(false);
    (widget.root.querySelector('[data-role="tf-false"]') as HTMLInputElement).checked = true;
    expect(widget.read()).toEqual({ ok: true, payload: { kind: "boolean", value: false } });
  });
});

describe("completion renderer", () => {
  it("rejects empty input and passes text through", () => {
    const widget = renderFormat({ type: "completion" }, doc);
    expect(widget.read().ok).toBe(false);
    const input = widget.root.querySelector('[data-role="text-input"]') as HTMLInputElement;
    input.value = "critical section";
    expect(widget.read()).toEqual({
      ok: true,
      payload: { kind: "text", value: "critical section" },
    });
  });
});

describe("numeric renderer", () => {
  it("validates locally before any payload is produced", () => {
    const widget = renderFormat({ type: "numeric" }, doc);
    const input = widget.root.querySelector('[data-role="numeric-input"]') as HTMLInputElement;
    input.value = "not a number";
    const bad = widget.read();
    expect(bad.ok).toBe(false);
    if (!bad.ok) {
      expect(bad.error).toMatch(/number/i);
    }
    input.value = "4.5";
    expect(widget.read()).toEqual({ ok: true, payload: { kind: "numeric", value: 4.5 } });
  });
});

describe("unknown formats", () => {
  it("renders an unsupported card whose read always fails", () => {
    const widget = renderFormat({ type: "unknown" }, doc);
    expect(widget.root.textContent).toMatch(/not supported/i);
    expect(widget.read().ok).toBe(false);
  });
});
