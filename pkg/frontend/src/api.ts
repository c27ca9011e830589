/**
 * Thin client for the pathway service. All persistent state lives on the
 * server; this module only moves JSON back and forth and turns error bodies
 * into typed ApiError instances the UI can render.
 */

import type {
  CatalogDoc,
  EventPatch,
  EventSpec,
  PathwayResponse,
  PathwaySummary,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly errorCode: string | null;
  readonly violations: Violation[];
  readonly expected: number | null;
  readonly current: number | null;

  constructor(status: number, body: unknown) {
    const parsed = parseErrorBody(body);
    super(parsed.message || `request failed with status ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.errorCode = parsed.errorCode;
    this.violations = parsed.violations;
    this.expected = parsed.expected;
    this.current = parsed.current;
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

function parseErrorBody(body: unknown): {
  message: string;
  errorCode: string | null;
  violations: Violation[];
  expected: number | null;
  current: number | null;
} {
  const out = {
    message: "",
    errorCode: null as string | null,
    violations: [] as Violation[],
    expected: null as number | null,
    current: null as number | null,
  };
  if (typeof body !== "object" || body === null) return out;
  const doc = body as Record<string, unknown>;
  if (typeof doc.error === "string") out.errorCode = doc.error;
  if (typeof doc.message === "string") out.message = doc.message;
  if (typeof doc.expected === "number") out.expected = doc.expected;
  if (typeof doc.current === "number") out.current = doc.current;
  if (Array.isArray(doc.violations)) {
    for (const raw of doc.violations) {
      if (typeof raw !== "object" || raw === null) continue;
      const v = raw as Record<string, unknown>;
      if (typeof v.rule_code === "string" && typeof v.message === "string") {
        out.violations.push({
          rule_code: v.rule_code,
          message: v.message,
          event_id: typeof v.event_id === "string" ? v.event_id : null,
        });
      }
    }
    if (!out.message && out.violations.length > 0) {
      out.message = out.violations.map((v) => v.message).join("; ");
    }
  }
  if (!out.message && out.errorCode) out.message = out.errorCode;
  return out;
}

export class ApiClient {
  constructor(private readonly baseUrl = "") {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let errorBody: unknown = null;
      try {
        errorBody = await response.json();
      } catch {
        // non-JSON error body; status alone carries the signal
      }
      throw new ApiError(response.status, errorBody);
    }
    return (await response.json()) as T;
  }

  healthz(): Promise<{ status: string; read_only: boolean }> {
    return this.request("GET", "/healthz");
  }

  catalog(): Promise<CatalogDoc> {
    return this.request("GET", "/catalog");
  }

  async listPathways(): Promise<PathwaySummary[]> {
    const doc = await this.request<{ pathways: PathwaySummary[] }>(
      "GET",
      "/pathways",
    );
    return doc.pathways;
  }

  createPathway(baseline: {
    subject_id: string;
    onset: string;
    consent: string;
    admission: string;
  }): Promise<PathwayResponse> {
    return this.request("POST", "/pathways", baseline);
  }

  getPathway(subjectId: string): Promise<PathwayResponse> {
    return this.request("GET", `/pathways/${encodeURIComponent(subjectId)}`);
  }

  addEvent(subjectId: string, spec: EventSpec): Promise<PathwayResponse> {
    return this.request(
      "POST",
      `/pathways/${encodeURIComponent(subjectId)}/events`,
      spec,
    );
  }

  updateEvent(
    subjectId: string,
    eventId: string,
    patch: EventPatch,
  ): Promise<PathwayResponse> {
    return this.request(
      "PATCH",
      `/pathways/${encodeURIComponent(subjectId)}/events/${encodeURIComponent(eventId)}`,
      patch,
    );
  }

  removeEvent(
    subjectId: string,
    eventId: string,
    expectedVersion?: number,
  ): Promise<PathwayResponse> {
    const query =
      expectedVersion === undefined ? "" : `?expected_version=${expectedVersion}`;
    return this.request(
      "DELETE",
      `/pathways/${encodeURIComponent(subjectId)}/events/${encodeURIComponent(eventId)}${query}`,
    );
  }

  exportUrl(subjectId: string): string {
    return `${this.baseUrl}/pathways/${encodeURIComponent(subjectId)}/export.csv`;
  }

  /** Fetch the two-line export as raw text, bytes preserved. */
  async exportCsv(subjectId: string): Promise<string> {
    const response = await fetch(this.exportUrl(subjectId));
    if (!response.ok) {
      let errorBody: unknown = null;
      try {
        errorBody = await response.json();
      } catch {
        // fall through with empty body
      }
      throw new ApiError(response.status, errorBody);
    }
    return response.text();
  }
}
