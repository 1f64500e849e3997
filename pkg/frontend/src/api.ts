// Typed client for the consultation engine's HTTP API. Every number the UI
// shows comes out of these payloads; nothing fuzzy is recomputed client-side.

export interface TermInfo {
  name: string;
  vertices: [number, number, number];
}

export interface AttributeInfo {
  name: string;
  label: string;
  universe: [number, number];
  terms: TermInfo[];
}

export interface KbSummary {
  format: number;
  attributes: AttributeInfo[];
  output: { name: string; universe: [number, number]; terms: TermInfo[] };
  diseases: { name: string; label: string }[];
  phases: { index: number; name: string; attributes: string[] }[];
  stats: { nodes: number; rules: number };
  checksum?: string;
}

export interface ActivationPayload {
  antecedent: [string, string][];
  disease: string;
  term: string;
  reliability: number;
  strength: number;
  clauses: [string, number][];
  origin: { subset: string[]; class: number };
}

export interface AssessmentPayload {
  disease: string;
  crisp: number;
  label: string;
  no_evidence: boolean;
  evaluated: boolean;
  activations: ActivationPayload[];
}

export interface ProbablePayload {
  disease: string;
  crisp: number;
  label: string;
}

export interface PhaseResponse {
  phase: number;
  mode: string;
  provided: string[];
  assessments: AssessmentPayload[];
  refined: ProbablePayload[];
  session: string;
  forked_from: string | null;
}

export interface ReportPhase {
  phase: number;
  mode: string;
  provided: string[];
  assessments: AssessmentPayload[];
  refined: ProbablePayload[];
}

export interface ReportPayload {
  threshold: number;
  mode: string;
  phases: ReportPhase[];
  final: ProbablePayload[];
}

export interface SessionInfo {
  id: string;
  created_at: number;
  phases: number[];
  refined: ProbablePayload[];
  audit: unknown[];
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly field: string | null = null,
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let message = `${res.status} ${res.statusText}`;
  let field: string | null = null;
  try {
    const body = await res.json();
    if (typeof body.detail === "string") {
      message = body.detail;
    } else if (body.detail && typeof body.detail.error === "string") {
      message = body.detail.error;
      field = body.detail.field ?? null;
    }
  } catch {
    // keep the status line
  }
  return new ApiError(message, res.status, field);
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? null : JSON.stringify(body),
    });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  loadKb(): Promise<KbSummary> {
    return this.get<KbSummary>("/api/kb");
  }

  async createSession(): Promise<string> {
    const body = await this.post<{ id: string }>("/api/sessions");
    return body.id;
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.get<SessionInfo>(`/api/sessions/${id}`);
  }

  submitPhase(
    session: string,
    phase: number,
    inputs: Record<string, number>,
  ): Promise<PhaseResponse> {
    return this.post<PhaseResponse>(`/api/sessions/${session}/phases/${phase}`, {
      inputs,
    });
  }

  getReport(session: string): Promise<ReportPayload> {
    return this.get<ReportPayload>(`/api/sessions/${session}/report`);
  }
}
