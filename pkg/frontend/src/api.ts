import type {
  ApiErrorJson,
  CatalogJson,
  ConcernJson,
  ProfileBody,
  ReportJson,
  TableJson,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** An error response from the API, decoded into its machine-readable parts. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: string[];
  readonly retryAfterSeconds: number | null;

  constructor(status: number, code: string, message: string, details: string[] = [], retryAfterSeconds: number | null = null) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.details = details;
    this.retryAfterSeconds = retryAfterSeconds;
  }

  /** 503 means the server is momentarily busy; the request is safe to repeat. */
  get retryable(): boolean {
    return this.status === 503;
  }
}

async function decodeError(response: Response): Promise<ApiError> {
  const retryHeader = response.headers.get("retry-after");
  const retryAfter = retryHeader === null ? null : Number(retryHeader);
  try {
    const body = (await response.json()) as ApiErrorJson;
    return new ApiError(
      body.status ?? response.status,
      body.code ?? "internal",
      body.message ?? response.statusText,
      body.details ?? [],
      Number.isFinite(retryAfter) ? retryAfter : null,
    );
  } catch {
    return new ApiError(response.status, "internal", `unexpected response (${response.status})`);
  }
}

/** Thin typed client over the JSON API; fetch is injectable for tests. */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (input, init) => fetch(input, init)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      throw await decodeError(response);
    }
    return (await response.json()) as T;
  }

  listConcerns(): Promise<ConcernJson[]> {
    return this.request<ConcernJson[]>("/api/v1/concerns");
  }

  concernResults(concernId: string, practice?: string): Promise<TableJson> {
    let path = `/api/v1/concerns/${encodeURIComponent(concernId)}/results`;
    if (practice !== undefined) {
      path += `?practice=${encodeURIComponent(practice)}`;
    }
    return this.request<TableJson>(path);
  }

  catalog(): Promise<CatalogJson> {
    return this.request<CatalogJson>("/api/v1/catalog");
  }

  recommend(profile: ProfileBody): Promise<ReportJson> {
    return this.request<ReportJson>("/api/v1/recommendations", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(profile),
    });
  }
}
