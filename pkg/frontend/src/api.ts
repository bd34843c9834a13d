// Typed client for the inference service HTTP contract.
//
// Endpoints (JSON): GET /api/models, POST /api/complete, POST /api/summarize,
// POST /api/search.  Errors arrive as { error: string } with 4xx status.

export interface ModelInfo {
  id: string;
  task: string;
  description: string;
}

export interface Candidate {
  token: string;
  prob: number;
}

export interface SearchHit {
  path: string;
  score: number;
}

export interface CompleteRequest {
  model_id: string;
  tokens: string[];
  k: number;
}

export interface SummarizeRequest {
  model_id: string;
  code: string;
}

export interface SearchRequest {
  model_id: string;
  query: string;
  k: number;
}

/** Minimal slice of the fetch API, so tests can inject a fake. */
export interface FetchResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<FetchResponse>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly baseUrl: string = "",
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.unwrap<T>(resp);
  }

  private async unwrap<T>(resp: FetchResponse): Promise<T> {
    const doc = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      const message = typeof doc?.error === "string" ? doc.error : `HTTP ${resp.status}`;
      throw new ApiError(resp.status, message);
    }
    return doc as T;
  }

  async models(): Promise<ModelInfo[]> {
    const resp = await this.fetchFn(this.baseUrl + "/api/models");
    const doc = await this.unwrap<{ models: ModelInfo[] }>(resp);
    return doc.models;
  }

  async complete(req: CompleteRequest): Promise<Candidate[]> {
    const doc = await this.post<{ candidates: Candidate[] }>("/api/complete", req);
    return doc.candidates;
  }

  async summarize(req: SummarizeRequest): Promise<string> {
    const doc = await this.post<{ summary: string }>("/api/summarize", req);
    return doc.summary;
  }

  async search(req: SearchRequest): Promise<SearchHit[]> {
    const doc = await this.post<{ results: SearchHit[] }>("/api/search", req);
    return doc.results;
  }
}

/** Whitespace tokenization, mirroring the server's space tokenizer. */
export function tokenize(text: string): string[] {
  return text.split(/\s+/).filter((t) => t.length > 0);
}
