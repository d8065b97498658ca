import { ApiClient } from "./api.js";
import type { Diagnostic, UploadResult } from "./types.js";

/**
 * Professor view: paste or pick an XML test file, see diagnostics grouped by
 * severity, and get a "start session" hook once the upload goes through.
 */
export class UploadController {
  lastResult: UploadResult | null = null;

  private doc: Document;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onAccepted: (testId: string) => void = () => {},
  ) {
    this.doc = root.ownerDocument;
  }

  render(): void {
    this.root.textContent = "";
    const card = this.doc.createElement("div");
    card.className = "card";

    const textarea = this.doc.createElement("textarea");
    textarea.setAttribute("data-role", "xml-input");
    textarea.placeholder = "Paste a <Test> document here";
    textarea.rows = 12;
    card.append(textarea);

    const file = this.doc.createElement("input");
    file.type = "file";
    file.accept = ".xml,application/xml,text/xml";
    file.setAttribute("data-role", "xml-file");
    file.addEventListener("change", () => {
      const picked = file.files?.[0];
      if (picked) {
        void picked.text().then((text) => {
          textarea.value = text;
        });
      }
    });
    card.append(file);

    const submit = this.doc.createElement("button");
    submit.setAttribute("data-role", "upload");
    submit.textContent = "Upload and validate";
    submit.addEventListener("click", () => {
      void this.uploadText(textarea.value);
    });
    card.append(submit);

    const panel = this.doc.createElement("div");
    panel.setAttribute("data-role", "diagnostics-panel");
    card.append(panel);

    this.root.append(card);
  }

  async uploadText(xml: string): Promise<UploadResult> {
    const result = await this.api.uploadTest(xml);
    this.lastResult = result;
    this.renderResult(result);
    return result;
  }

  private renderResult(result: UploadResult): void {
    const panel = this.root.querySelector('[data-role="diagnostics-panel"]');
    if (!panel) {
      return;
    }
    panel.textContent = "";
    if (result.status === 400) {
      const banner = this.doc.createElement("p");
      banner.setAttribute("data-role", "malformed-banner");
      banner.className = "banner banner-error";
      banner.textContent = `Not a well-formed test document: ${result.message ?? ""}`;
      panel.append(banner);
      return;
    }
    const status = this.doc.createElement("p");
    status.setAttribute("data-role", "upload-status");
    status.textContent = result.ok
      ? `Accepted. Test id: ${result.test_id}`
      : "Rejected: fix the errors below and upload again.";
    panel.append(status);

    for (const severity of ["error", "warning"] as const) {
      const group = result.diagnostics.filter((d) => d.severity === severity);
      if (group.length === 0) {
        continue;
      }
      const heading = this.doc.createElement("h3");
      heading.textContent = severity === "error" ? "Errors" : "Warnings";
      panel.append(heading);
      const list = this.doc.createElement("ul");
      list.setAttribute("data-role", `diagnostics-${severity}`);
      for (const diagnostic of group) {
        list.append(this.renderDiagnostic(diagnostic));
      }
      panel.append(list);
    }

    if (result.ok && result.test_id) {
      const start = this.doc.createElement("button");
      start.setAttribute("data-role", "start-session");
      start.textContent = "Start a session";
      const testId = result.test_id;
      start.addEventListener("click", () => this.onAccepted(testId));
      panel.append(start);
    }
  }

  private renderDiagnostic(diagnostic: Diagnostic): HTMLElement {
    const row = this.doc.createElement("li");
    row.setAttribute("data-role", "diagnostic-row");
    row.setAttribute("data-code", diagnostic.code);
    const where = diagnostic.question_id ? ` [${diagnostic.question_id}]` : "";
    row.textContent = `${diagnostic.code}${where}: ${diagnostic.message}`;
    return row;
  }
}
