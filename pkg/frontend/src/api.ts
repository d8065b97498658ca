import type {
  AnswerPayload,
  AnswerResponse,
  NextResponse,
  Report,
  SessionConfigBody,
  UploadResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Thin typed client over the session service; fetch is injectable for tests. */
export class ApiClient {
  /** Number of HTTP requests actually sent (client-side validation must not count). */
  requests = 0;

  constructor(
    private baseUrl = "",
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async send(path: string, init?: RequestInit): Promise<Response> {
    this.requests += 1;
    return this.fetchFn(`${this.baseUrl}${path}`, init);
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.send(path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? "E-HTTP", body.message ?? "request failed");
    }
    return body as T;
  }

  /** Upload an XML test document; 400/422 are part of the result, not thrown. */
  async uploadTest(xml: string): Promise<UploadResult> {
    const response = await this.send("/tests", {
      method: "POST",
      headers: { "Content-Type": "application/xml" },
      body: xml,
    });
    const body = await response.json();
    if (response.ok) {
      return {
        ok: true,
        status: response.status,
        test_id: body.test_id,
        diagnostics: body.diagnostics ?? [],
      };
    }
    return {
      ok: false,
      status: response.status,
      test_id: body.test_id,
      diagnostics: body.diagnostics ?? [],
      message: body.message,
    };
  }

  async createSession(testId: string, config: SessionConfigBody = {}): Promise<string> {
    const body = await this.json<{ session_id: string }>(`/tests/${testId}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
    return body.session_id;
  }

  async next(sessionId: string): Promise<NextResponse> {
    return this.json<NextResponse>(`/sessions/${sessionId}/next`);
  }

  async answer(
    sessionId: string,
    questionId: string,
    payload: AnswerPayload,
  ): Promise<AnswerResponse> {
    return this.json<AnswerResponse>(`/sessions/${sessionId}/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question_id: questionId, answer: payload }),
    });
  }

  async report(sessionId: string): Promise<Report> {
    const body = await this.json<{ report: Report }>(`/sessions/${sessionId}/report`);
    return body.report;
  }
}
