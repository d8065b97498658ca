import type { AnswerPayload, QuestionFormat } from "./types.js";

export type ReadResult = { ok: true; payload: AnswerPayload } | { ok: false; error: string };

export interface AnswerInput {
  root: HTMLElement;
  read(): ReadResult;
}

/**
 * Build the input widget for one question format. The renderers are a closed
 * set matching the four server formats; anything else gets an "unsupported"
 * card whose read() always fails, so no request can be sent.
 */
export function renderFormat(format: QuestionFormat, doc: Document): AnswerInput {
  switch (format.type) {
    case "choice":
      return renderChoice(format.choices, format.multi_select, doc);
    case "true_false":
      return renderTrueFalse(doc);
    case "completion":
      return renderCompletion(doc);
    case "numeric":
      return renderNumeric(doc);
    default:
      return renderUnsupported(doc);
  }
}

function renderChoice(choices: string[], multi: boolean, doc: Document): AnswerInput {
  const root = doc.createElement("div");
  root.className = "format format-choice";
  const inputs: HTMLInputElement[] = [];
  choices.forEach((choice, index) => {
    const label = doc.createElement("label");
    label.className = "choice-row";
    const input = doc.createElement("input");
    input.type = multi ? "checkbox" : "radio";
    input.name = "choice";
    input.value = String(index);
    input.setAttribute("data-role", "choice-input");
    inputs.push(input);
    const text = doc.createElement("span");
    text.textContent = choice;
    label.append(input, text);
    root.append(label);
  });
  return {
    root,
    read() {
      const indices = inputs
        .map((input, index) => (input.checked ? index : -1))
        .filter((index) => index >= 0);
      if (!multi && indices.length !== 1) {
        return { ok: false, error: "Choose one option." };
      }
      return { ok: true, payload: { kind: "choice", indices } };
    },
  };
}

function renderTrueFalse(doc: Document): AnswerInput {
  const root = doc.createElement("div");
  root.className = "format format-truefalse";
  const inputs: HTMLInputElement[] = [];
  for (const value of ["true", "false"]) {
    const label = doc.createElement("label");
    label.className = "choice-row";
    const input = doc.createElement("input");
    input.type = "radio";
    input.name = "truefalse";
    input.value = value;
    input.setAttribute("data-role", `tf-${value}`);
    inputs.push(input);
    const text = doc.createElement("span");
    text.textContent = value === "true" ? "True" : "False";
    label.append(input, text);
    root.append(label);
  }
  return {
    root,
    read() {
      const picked = inputs.find((input) => input.checked);
      if (!picked) {
        return { ok: false, error: "Choose true or false." };
      }
      return { ok: true, payload: { kind: "boolean", value: picked.value === "true" } };
    },
  };
}

function renderCompletion(doc: Document): AnswerInput {
  const root = doc.createElement("div");
  root.className = "format format-completion";
  const input = doc.createElement("input");
  input.type = "text";
  input.setAttribute("data-role", "text-input");
  input.placeholder = "Your answer";
  root.append(input);
  return {
    root,
    read() {
      if (input.value.trim() === "") {
        return { ok: false, error: "Enter an answer." };
      }
      return { ok: true, payload: { kind: "text", value: input.value } };
    },
  };
}

function renderNumeric(doc: Document): AnswerInput {
  const root = doc.createElement("div");
  root.className = "format format-numeric";
  const input = doc.createElement("input");
  input.type = "text";
  input.inputMode = "decimal";
  input.setAttribute("data-role", "numeric-input");
  input.placeholder = "A number";
  root.append(input);
  return {
    root,
    read() {
      const raw = input.value.trim();
      const value = Number(raw);
      if (raw === "" || Number.isNaN(value)) {
        return { ok: false, error: "Enter a number." };
      }
      return { ok: true, payload: { kind: "numeric", value } };
    },
  };
}

function renderUnsupported(doc: Document): AnswerInput {
  const root = doc.createElement("div");
  root.className = "format format-unsupported";
  root.textContent = "This question format is not supported by this client.";
  return {
    root,
    read() {
      return { ok: false, error: "Unsupported question format." };
    },
  };
}
