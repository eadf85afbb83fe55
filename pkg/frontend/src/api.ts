/** Typed client for the repair-session HTTP API. */

export interface RunOptions {
  strategy: string;
  pool: string;
  equiv_exclude: boolean;
  prune: boolean;
  order: number[] | null;
  seed: number;
}

export interface QuestionContext {
  kind: string;
  wrong_axiom: string | null;
  seed_axiom: string | null;
  left_label: string;
  right_label: string;
  left_pane: string[];
  right_pane: string[];
}

export interface Pending {
  axiom: string;
  context: QuestionContext | null;
  asked: number;
}

export interface HistoryEntry {
  axiom: string;
  answer: boolean;
  revised: boolean;
}

export type SessionState =
  | "not_started"
  | "awaiting_answer"
  | "done"
  | "stale"
  | "failed";

export interface SessionInfo {
  id: string;
  state: SessionState;
  auto: boolean | null;
  options: RunOptions;
  wrong: string[];
  ontology_size: number;
  has_oracle: boolean;
  answered: number;
  history: HistoryEntry[];
  error: { invariant: string; detail: string } | null;
  pending: Pending | null;
  changed?: boolean;
}

export interface RunResult {
  report: string;
  strategy: string;
  repair_valid: boolean;
  queries_distinct: number;
  removed: string[];
  added: string[];
  weakened: string[];
  completed: string[];
  initial_axioms: string[];
  final_axioms: string[];
}

export interface CompatibilityWarning {
  kind: string;
  axiom: string;
  support: string[];
}

export interface FixtureTexts {
  name: string;
  ontology: string;
  wrong: string;
  oracle?: string;
}

export interface CreateSessionBody {
  fixture?: string;
  ontology?: string;
  wrong?: string;
  oracle?: string;
  options?: Partial<RunOptions>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class Api {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const data: unknown = await resp.json().catch(() => null);
    if (!resp.ok) {
      const err = (data ?? {}) as { code?: string; message?: string; detail?: unknown };
      throw new ApiError(resp.status, err.code ?? "unknown", err.message ?? resp.statusText, err.detail);
    }
    return data as T;
  }

  fixture(name: string): Promise<FixtureTexts> {
    return this.request("GET", `/fixtures/${encodeURIComponent(name)}`);
  }

  createSession(body: CreateSessionBody): Promise<SessionInfo> {
    return this.request("POST", "/sessions", body);
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${id}`);
  }

  start(id: string, auto: boolean): Promise<SessionInfo> {
    return this.request("POST", `/sessions/${id}/start`, { auto });
  }

  answer(id: string, axiom: string, answer: boolean): Promise<SessionInfo> {
    return this.request("POST", `/sessions/${id}/answers`, { axiom, answer });
  }

  revise(id: string, axiom: string, answer: boolean): Promise<SessionInfo> {
    return this.request("POST", `/sessions/${id}/revisions`, { axiom, answer });
  }

  result(id: string): Promise<RunResult> {
    return this.request("GET", `/sessions/${id}/result`);
  }

  warnings(id: string): Promise<{ warnings: CompatibilityWarning[] }> {
    return this.request("GET", `/sessions/${id}/warnings`);
  }
}
