/** API client: auth + lease headers, idempotency keys on every mutation, and
 * a strict-FIFO mutation queue. Network failures keep the job at the head of
 * the queue and retry (the idempotency key makes retries safe); HTTP errors
 * reject the caller so the UI can roll back its optimistic state. */

import type {
  AnnotationSetDto,
  DocumentSummary,
  EditAction,
  EditResponse,
  FrameDetail,
  FrameSearchHit,
  LeaseDto,
  SentenceDto,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${status} ${code}: ${detail}`);
  }
}

type FetchFn = typeof fetch;

interface QueueJob {
  run: () => Promise<Response>;
  resolve: (value: unknown) => void;
  reject: (error: unknown) => void;
}

export interface ApiClientOptions {
  baseUrl: string;
  authToken?: string;
  annotator?: string;
  fetchFn?: FetchFn;
  retryDelayMs?: number;
  keyGen?: () => string;
}

export class ApiClient {
  private baseUrl: string;
  private authToken?: string;
  private annotator?: string;
  private fetchFn: FetchFn;
  private retryDelayMs: number;
  private keyGen: () => string;
  private leaseTokens = new Map<string, string>();
  private queue: QueueJob[] = [];
  private pumping = false;

  constructor(options: ApiClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.authToken = options.authToken;
    this.annotator = options.annotator;
    this.fetchFn = options.fetchFn ?? fetch;
    this.retryDelayMs = options.retryDelayMs ?? 1000;
    this.keyGen = options.keyGen ?? (() => crypto.randomUUID());
  }

  newIdempotencyKey(): string {
    return this.keyGen();
  }

  setLeaseToken(docId: string, token: string): void {
    this.leaseTokens.set(docId, token);
  }

  pendingCount(): number {
    return this.queue.length + (this.pumping ? 1 : 0);
  }

  private headers(docId?: string): Record<string, string> {
    const h: Record<string, string> = { "Content-Type": "application/json" };
    if (this.authToken) h["Authorization"] = `Bearer ${this.authToken}`;
    if (this.annotator) h["X-Annotator"] = this.annotator;
    const lease = docId ? this.leaseTokens.get(docId) : undefined;
    if (lease) h["X-Lease-Token"] = lease;
    return h;
  }

  private async readError(response: Response): Promise<ApiError> {
    let code = "ERROR";
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: { code?: string; detail?: string } };
      if (body.detail) {
        code = body.detail.code ?? code;
        detail = body.detail.detail ?? detail;
      }
    } catch {
      /* non-JSON error body */
    }
    return new ApiError(response.status, code, detail);
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: this.headers(),
    });
    if (!response.ok) throw await this.readError(response);
    return (await response.json()) as T;
  }

  /** Enqueue a mutation; jobs flush strictly in order. A job is retried in
   * place for as long as the network is down and is never dropped. */
  private enqueue<T>(run: () => Promise<Response>): Promise<T> {
    return new Promise<T>((resolve, reject) => {
      this.queue.push({ run, resolve: resolve as (v: unknown) => void, reject });
      void this.pump();
    });
  }

  private sleep(ms: number): Promise<void> {
    return new Promise((r) => setTimeout(r, ms));
  }

  private async pump(): Promise<void> {
    if (this.pumping) return;
    this.pumping = true;
    try {
      while (this.queue.length > 0) {
        const job = this.queue[0]!;
        let response: Response;
        try {
          response = await job.run();
        } catch {
          await this.sleep(this.retryDelayMs); // offline: retry the same job
          continue;
        }
        this.queue.shift();
        if (!response.ok) {
          job.reject(await this.readError(response));
        } else {
          job.resolve(await response.json());
        }
      }
    } finally {
      this.pumping = false;
    }
    if (this.queue.length > 0) void this.pump();
  }

  // -- reads -----------------------------------------------------------------

  async documents(): Promise<DocumentSummary[]> {
    const body = await this.get<{ documents: DocumentSummary[] }>("/api/v1/documents");
    return body.documents;
  }

  async sentences(docId: string, condition = "machine_human"): Promise<SentenceDto[]> {
    const body = await this.get<{ sentences: SentenceDto[] }>(
      `/api/v1/documents/${encodeURIComponent(docId)}/sentences?condition=${condition}`,
    );
    return body.sentences;
  }

  async annotationSets(sentenceId: string, condition = "machine_human"): Promise<AnnotationSetDto[]> {
    const body = await this.get<{ annotation_sets: AnnotationSetDto[] }>(
      `/api/v1/sentences/${encodeURIComponent(sentenceId)}/annotation-sets?condition=${condition}`,
    );
    return body.annotation_sets;
  }

  async searchFrames(query: string, lemma = ""): Promise<FrameSearchHit[]> {
    const params = new URLSearchParams({ query, lemma });
    const body = await this.get<{ results: FrameSearchHit[] }>(
      `/api/v1/framebank/frames?${params}`,
    );
    return body.results;
  }

  async frameDetail(name: string): Promise<FrameDetail> {
    return this.get<FrameDetail>(`/api/v1/framebank/frames/${encodeURIComponent(name)}`);
  }

  // -- leases ----------------------------------------------------------------

  async acquireLease(docId: string): Promise<LeaseDto> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/v1/documents/${encodeURIComponent(docId)}/lease`,
      { method: "POST", headers: this.headers() },
    );
    if (!response.ok) throw await this.readError(response);
    const lease = (await response.json()) as LeaseDto;
    this.setLeaseToken(docId, lease.token);
    return lease;
  }

  async releaseLease(docId: string): Promise<void> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/v1/documents/${encodeURIComponent(docId)}/lease`,
      { method: "DELETE", headers: this.headers() },
    );
    if (!response.ok) throw await this.readError(response);
    this.leaseTokens.delete(docId);
  }

  // -- mutations (queued, idempotent) -----------------------------------------

  edit(asId: string, docId: string, action: EditAction, idempotencyKey: string): Promise<EditResponse> {
    return this.enqueue<EditResponse>(() =>
      this.fetchFn(`${this.baseUrl}/api/v1/annotation-sets/${encodeURIComponent(asId)}`, {
        method: "PATCH",
        headers: this.headers(docId),
        body: JSON.stringify({
          action: action.action,
          payload: action.payload ?? {},
          idempotency_key: idempotencyKey,
        }),
      }),
    );
  }

  create(
    sentenceId: string,
    docId: string,
    target: { start: number; end: number },
    frame: string,
    idempotencyKey: string,
  ): Promise<EditResponse> {
    return this.enqueue<EditResponse>(() =>
      this.fetchFn(`${this.baseUrl}/api/v1/annotation-sets`, {
        method: "POST",
        headers: this.headers(docId),
        body: JSON.stringify({
          sentence_id: sentenceId,
          target,
          frame,
          idempotency_key: idempotencyKey,
        }),
      }),
    );
  }

  timer(
    asId: string,
    docId: string,
    action: "start" | "stop",
    ts: number,
  ): Promise<{ seq: number; deduplicated: boolean; time_spent: number }> {
    const key = this.newIdempotencyKey();
    return this.enqueue(() =>
      this.fetchFn(`${this.baseUrl}/api/v1/annotation-sets/${encodeURIComponent(asId)}/timer`, {
        method: "POST",
        headers: this.headers(docId),
        body: JSON.stringify({ action, ts, idempotency_key: key }),
      }),
    );
  }
}
