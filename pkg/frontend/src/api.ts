/**
 * Typed client for the annotation service HTTP API. The UI talks to the
 * service through this module exclusively; there is no other data path.
 */

export interface Pair {
  id: string;
  text1: string;
  text2: string;
  source: "ManualExtraction" | "AutoHeading";
  status: "Pending" | "Claimed" | "Annotated";
  version: number;
  original_text1?: string;
  original_text2?: string;
}

export interface Ticket {
  pair_id: string;
  annotator: string;
  expires_at: number;
  batch_id: string | null;
}

export interface Lint {
  code: string;
  detail: string;
}

export interface Claimed {
  pair: Pair;
  ticket: Ticket;
  lints: Lint[];
}

export interface AnnotationBody {
  pair_id: string;
  annotator: string;
  label: string;
  rewrites: [string, string][];
  note?: string;
}

export interface StoredAnnotation {
  pair_id: string;
  annotator: string;
  label: string;
  rewrites: [string, string][];
  note: string | null;
  created_at: number;
}

export interface EditBody {
  annotator: string;
  new_text1?: string;
  new_text2?: string;
}

export interface EditResult {
  pair: Pair;
  directive: string | null;
  lints: Lint[];
}

export interface AgreementReport {
  n_items: number;
  n_scored: number;
  n_skipped: number;
  exact_rate: number;
  base_rate: number;
  positive_rate: number;
  kappa_exact: number;
  kappa_weighted: number;
  confusion: Record<string, Record<string, number>>;
}

/** A non-2xx response, or no response at all (code "ConnectionFailed"). */
export class ApiError extends Error {
  code: string;
  detail: string;
  violations: string[];
  status: number | null;

  constructor(
    code: string,
    detail: string,
    status: number | null = null,
    violations: string[] = [],
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
    this.code = code;
    this.detail = detail;
    this.status = status;
    this.violations = violations;
  }
}

export interface ClientOptions {
  token?: string;
  fetchImpl?: typeof fetch;
}

export class ApiClient {
  private baseUrl: string;
  private token: string | undefined;
  private fetchImpl: typeof fetch;

  constructor(baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Response> {
    const headers: Record<string, string> = {};
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    if (this.token !== undefined) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("ConnectionFailed", String(err));
    }
    if (!response.ok) {
      throw await toApiError(response);
    }
    return response;
  }

  async health(): Promise<{ status: string; version: string }> {
    const response = await this.request("GET", "/healthz");
    return response.json();
  }

  /** Claim the next eligible pair; null means the queue is drained. */
  async nextCandidate(
    batchId: string,
    annotator: string,
  ): Promise<Claimed | null> {
    const response = await this.request(
      "GET",
      `/batches/${encodeURIComponent(batchId)}/next` +
        `?annotator=${encodeURIComponent(annotator)}`,
    );
    if (response.status === 204) {
      return null;
    }
    return response.json();
  }

  async submitAnnotation(body: AnnotationBody): Promise<StoredAnnotation> {
    const response = await this.request("POST", "/annotations", body);
    return response.json();
  }

  async editPair(pairId: string, body: EditBody): Promise<EditResult> {
    const response = await this.request(
      "POST",
      `/pairs/${encodeURIComponent(pairId)}/edit`,
      body,
    );
    return response.json();
  }

  async batchAgreement(batchId: string): Promise<AgreementReport> {
    const response = await this.request(
      "GET",
      `/batches/${encodeURIComponent(batchId)}/agreement`,
    );
    return response.json();
  }

  async exportCorpus(format: "jsonl" | "tsv", batch?: string): Promise<string> {
    const query = batch === undefined ? "" : `&batch=${encodeURIComponent(batch)}`;
    const response = await this.request("GET", `/export?format=${format}${query}`);
    return response.text();
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let code = "HttpError";
  let detail = `${response.status} ${response.statusText}`;
  let violations: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.error === "string") {
      code = body.error;
    }
    if (typeof body.detail === "string") {
      detail = body.detail;
    }
    if (Array.isArray(body.violations)) {
      violations = body.violations;
    }
  } catch {
    // Non-JSON error body; keep the HTTP status line.
  }
  return new ApiError(code, detail, response.status, violations);
}
