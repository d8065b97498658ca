import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

type Call = { url: string; init?: RequestInit };

function stubFetch(status: number, body: unknown, calls: Call[] = []) {
  const fetchFn = (async (url: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { fetchFn, calls };
}

describe("ApiClient.uploadTest", () => {
  it("maps an accepted upload", async () => {
    const { fetchFn } = stubFetch(200, {
      status: "accepted",
      test_id: "abc123",
      diagnostics: [],
    });
    const client = new ApiClient("", fetchFn);
    const result = await client.uploadTest("<Test/>");
    expect(result.ok).toBe(true);
    expect(result.test_id).toBe("abc123");
    expect(client.requests).toBe(1);
  });

  it("maps a rejected upload with diagnostics", async () => {
    const { fetchFn } = stubFetch(422, {
      status: "rejected",
      test_id: "abc123",
      diagnostics: [
        { severity: "error", code: "E-DANGLING-REF", question_id: "A", message: "x" },
      ],
    });
    const result = await new ApiClient("", fetchFn).uploadTest("<Test>...</Test>");
    expect(result.ok).toBe(false);
    expect(result.status).toBe(422);
    expect(result.diagnostics[0].code).toBe("E-DANGLING-REF");
  });

  it("maps malformed XML as a 400 result", async () => {
    const { fetchFn } = stubFetch(400, { error: "E-XML", message: "malformed" });
    const result = await new ApiClient("", fetchFn).uploadTest("not xml");
    expect(result.ok).toBe(false);
    expect(result.status).toBe(400);
    expect(result.message).toContain("malformed");
  });
});

describe("ApiClient session calls", () => {
  it("posts the session config and returns the id", async () => {
    const calls: Call[] = [];
    const { fetchFn } = stubFetch(200, { session_id: "s-1" }, calls);
    const client = new ApiClient("http://example", fetchFn);
    const sessionId = await client.createSession("t-1", { seed: 5 });
    expect(sessionId).toBe("s-1");
    expect(calls[0].url).toBe("http://example/tests/t-1/sessions");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ seed: 5 });
  });

  it("posts answers with question id and payload", async () => {
    const calls: Call[] = [];
    const { fetchFn } = stubFetch(200, { correct: true, next_available: true }, calls);
    const client = new ApiClient("", fetchFn);
    const response = await client.answer("s-1", "A", { kind: "boolean", value: true });
    expect(response.correct).toBe(true);
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      question_id: "A",
      answer: { kind: "boolean", value: true },
    });
  });

  it("raises ApiError with the server code on failure", async () => {
    const { fetchFn } = stubFetch(404, { error: "E-UNKNOWN-SESSION", message: "nope" });
    const client = new ApiClient("", fetchFn);
    await expect(client.next("missing")).rejects.toMatchObject({
      status: 404,
      code: "E-UNKNOWN-SESSION",
    });
    await expect(client.next("missing")).rejects.toBeInstanceOf(ApiError);
  });
});
