import type {
  FrontResponse,
  HealthResponse,
  HistogramsResponse,
  OptimizeBody,
  ParetoBody,
  ProductInfo,
  Solution,
  StoreInfo,
} from "./types.js";

/** Service error with the machine-readable kind from the response body. */
export class ApiError extends Error {
  readonly kind: string;
  readonly status: number;

  constructor(status: number, kind: string, message: string) {
    super(message);
    this.kind = kind;
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client; fetch is injectable so tests can stub the network. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      const kind = typeof body?.kind === "string" ? body.kind : "Error";
      const message = typeof body?.message === "string" ? body.message : response.statusText;
      throw new ApiError(response.status, kind, message);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<HealthResponse> {
    return this.request("/health");
  }

  stores(): Promise<StoreInfo[]> {
    return this.request("/stores");
  }

  products(store?: string): Promise<ProductInfo[]> {
    const query = store ? `?store=${encodeURIComponent(store)}` : "";
    return this.request(`/products${query}`);
  }

  optimize(body: OptimizeBody): Promise<Solution> {
    return this.post("/optimize", body);
  }

  pareto(body: ParetoBody): Promise<FrontResponse> {
    return this.post("/pareto", body);
  }

  histograms(bins?: number): Promise<HistogramsResponse> {
    const query = bins ? `?bins=${bins}` : "";
    return this.request(`/histograms${query}`);
  }
}
