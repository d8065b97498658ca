import { ApiClient, ApiError } from "./api.js";
import { renderFormat, type AnswerInput } from "./formats.js";
import type { NextResponse, Report, SessionConfigBody } from "./types.js";

/**
 * Drives one live test session: fetch the current question, render it per
 * format, submit the answer, flash the on-line correction, repeat; once the
 * server reports the session finished, render the report screen.
 *
 * The controller never computes correctness locally; everything it shows
 * mirrors server responses.
 */
export class SessionController {
  sessionId: string | null = null;
  answered = 0;
  lastCorrect: boolean | null = null;

  private input: AnswerInput | null = null;
  private currentQuestionId: string | null = null;
  private doc: Document;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
  ) {
    this.doc = root.ownerDocument;
  }

  async start(testId: string, config: SessionConfigBody = {}): Promise<void> {
    this.sessionId = await this.api.createSession(testId, config);
    this.answered = 0;
    this.lastCorrect = null;
    await this.refresh();
  }

  /** Re-attach to an existing session (page refresh resumes in place). */
  async resume(sessionId: string): Promise<void> {
    this.sessionId = sessionId;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    let state: NextResponse;
    try {
      state = await this.api.next(this.sessionId);
    } catch (error) {
      this.renderFailure(error);
      return;
    }
    if (state.finished) {
      this.renderReport(state.report);
    } else {
      this.renderQuestion(state);
    }
  }

  private clear(): void {
    this.root.textContent = "";
  }

  private el(tag: string, role: string, text = ""): HTMLElement {
    const element = this.doc.createElement(tag);
    element.setAttribute("data-role", role);
    if (text) {
      element.textContent = text;
    }
    return element;
  }

  private renderQuestion(state: Extract<NextResponse, { finished: false }>): void {
    this.clear();
    const { question } = state;
    this.currentQuestionId = question.id;
    this.root.setAttribute("data-question-id", question.id);

    const card = this.el("div", "question-card");
    card.className = "card";
    card.append(this.el("p", "progress", `Answered: ${this.answered}`));
    if (this.lastCorrect !== null) {
      const flash = this.el("p", "flash", this.lastCorrect ? "Correct" : "Incorrect");
      flash.className = this.lastCorrect ? "flash flash-correct" : "flash flash-incorrect";
      card.append(flash);
    }
    card.append(this.el("h2", "prompt", question.prompt));

    this.input = renderFormat(question.format, this.doc);
    card.append(this.input.root);

    const validation = this.el("p", "validation");
    validation.className = "validation";
    card.append(validation);

    const submit = this.el("button", "submit", "Submit answer");
    submit.addEventListener("click", () => {
      void this.submit();
    });
    card.append(submit);
    this.root.append(card);
  }

  async submit(): Promise<void> {
    if (!this.sessionId || !this.input || !this.currentQuestionId) {
      return;
    }
    const read = this.input.read();
    const validation = this.root.querySelector('[data-role="validation"]');
    if (!read.ok) {
      // client-side validation: no request leaves the browser
      if (validation) {
        validation.textContent = read.error;
      }
      return;
    }
    try {
      const response = await this.api.answer(this.sessionId, this.currentQuestionId, read.payload);
      this.lastCorrect = response.correct;
      this.answered += 1;
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError && (error.status === 409 || error.status === 422)) {
        if (validation) {
          validation.textContent = `${error.code}: ${error.message}`;
        }
        return; // state preserved; the student can retry in place
      }
      this.renderFailure(error);
    }
  }

  private renderReport(report: Report): void {
    this.clear();
    this.root.removeAttribute("data-question-id");
    const card = this.el("div", "report");
    card.className = "card report";
    card.append(this.el("h2", "report-title", "Session finished"));
    const ratio = this.el("p", "ratio", `Correct ratio: ${report.correct_ratio.toFixed(2)}`);
    card.append(ratio);
    card.append(
      this.el(
        "p",
        "summary",
        `${report.correct_count} of ${report.answered_count} answers correct over ` +
          `${report.distinct_questions} questions; ${report.balanced_repeats} balanced repeats.`,
      ),
    );
    if (report.balance_floor_reached) {
      card.append(this.el("p", "balance-floor", "Balance floor reached."));
    }
    const attempts = this.el("ul", "attempts");
    for (const [qid, flags] of Object.entries(report.attempts)) {
      const row = this.doc.createElement("li");
      row.textContent = `${qid}: ${flags.map((f) => (f ? "right" : "wrong")).join(", ")}`;
      attempts.append(row);
    }
    card.append(attempts);
    this.root.append(card);
  }

  private renderFailure(error: unknown): void {
    const banner = this.el(
      "div",
      "retry-banner",
      `Connection problem (${error instanceof Error ? error.message : "unknown"}). `,
    );
    banner.className = "banner banner-error";
    const retry = this.el("button", "retry", "Retry");
    retry.addEventListener("click", () => {
      banner.remove();
      void this.refresh();
    });
    banner.append(retry);
    this.root.prepend(banner);
  }
}
