// Wire types mirroring docs/api.md. The server strips every key-revealing
// field before a question reaches the client, so none exist here.

export type QuestionFormat =
  | { type: "choice"; choices: string[]; multi_select: boolean }
  | { type: "true_false" }
  | { type: "completion" }
  | { type: "numeric" }
  | { type: "unknown" };

export interface QuestionView {
  id: string;
  prompt: string;
  format: QuestionFormat;
}

export interface Report {
  total_selections: number;
  distinct_questions: number;
  answered_count: number;
  correct_count: number;
  correct_ratio: number;
  attempts: Record<string, boolean[]>;
  balanced_repeats: number;
  balance_floor_reached: boolean;
  termination_mode: string;
  mode_satisfied: boolean;
}

export type NextResponse =
  | { finished: false; question: QuestionView }
  | { finished: true; report: Report };

export interface AnswerResponse {
  correct: boolean;
  next_available: boolean;
}

export type AnswerPayload =
  | { kind: "choice"; indices: number[] }
  | { kind: "boolean"; value: boolean }
  | { kind: "text"; value: string }
  | { kind: "numeric"; value: number };

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  question_id: string | null;
  message: string;
}

export interface UploadResult {
  ok: boolean;
  status: number;
  test_id?: string;
  diagnostics: Diagnostic[];
  message?: string;
}

export interface SessionConfigBody {
  seed?: number;
  termination_mode?: "all_answered" | "finals_reached" | "all_correct";
  max_visits_per_question?: number;
  max_balanced_repeats?: number;
  eventing_policy?: "fifo" | "by_reference_count";
}
