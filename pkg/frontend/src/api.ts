// Thin typed client over the documented /api endpoints. The fetch
// implementation is injectable so tests can fake the service.

import type {
  DescribeResponse,
  ErrorBody,
  Fluent,
  ProductsResponse,
  ProfileResponse,
  RecommendationsResponse,
  SearchResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ErrorBody) {
    super(body.message || body.code);
    this.code = body.code;
    this.status = status;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ErrorBody;
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        body = { code: "unreachable", message: `HTTP ${response.status}` };
      }
      throw new ApiRequestError(response.status, body);
    }
    return (await response.json()) as T;
  }

  search(q: string, limit = 25): Promise<SearchResponse> {
    return this.request<SearchResponse>("/api/search", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ q, limit }),
    });
  }

  describe(iri: string): Promise<DescribeResponse> {
    return this.request<DescribeResponse>(
      `/api/ontology/describe?iri=${encodeURIComponent(iri)}`,
    );
  }

  products(classIri: string): Promise<ProductsResponse> {
    return this.request<ProductsResponse>(
      `/api/products?class=${encodeURIComponent(classIri)}`,
    );
  }

  upsertFluent(consumerId: string, fluent: Fluent): Promise<ProfileResponse> {
    return this.request<ProfileResponse>(
      `/api/profiles/${encodeURIComponent(consumerId)}/fluents`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(fluent),
      },
    );
  }

  recommendations(consumerId: string, limit = 10): Promise<RecommendationsResponse> {
    return this.request<RecommendationsResponse>(
      `/api/recommendations/${encodeURIComponent(consumerId)}?limit=${limit}`,
    );
  }

  postEvent(kind: "action" | "behavior", name: string, payload: Record<string, string>): Promise<unknown> {
    return this.request("/api/events", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ kind, name, payload }),
    });
  }
}
