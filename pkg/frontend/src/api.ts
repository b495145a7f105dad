// Typed client for the service's JSON API. All indicator numbers come
// from these endpoints; the UI never recomputes them.

export interface FrameSummary {
  name: string;
  row_count: number;
  date_range: { start: string; end: string } | null;
  columns: string[];
  stale?: boolean;
}

export interface FrameRow {
  date: string;
  [column: string]: string | number | null;
}

export interface RowsResponse {
  name: string;
  row_count: number;
  columns: string[];
  rows: FrameRow[];
}

export interface IndicatorInfo {
  kind: string;
  period: number;
  source_column: string;
  label: string;
  values: (number | null)[];
}

export interface IndicatorsResponse {
  frame: string;
  row_count: number;
  indicators: IndicatorInfo[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        typeof body.code === 'string' ? body.code : 'error',
        typeof body.message === 'string' ? body.message : `HTTP ${response.status}`,
      );
    }
    return body as T;
  }

  uploadFrame(name: string, csv: Blob | string): Promise<FrameSummary> {
    const form = new FormData();
    form.append('name', name);
    form.append('file', csv instanceof Blob ? csv : new Blob([csv]), `${name}.csv`);
    return this.request('/api/frames', { method: 'POST', body: form });
  }

  frameRows(name: string): Promise<RowsResponse> {
    return this.request(`/api/frames/${encodeURIComponent(name)}`);
  }

  indicators(name: string, spec: string): Promise<IndicatorsResponse> {
    const query = new URLSearchParams({ spec });
    return this.request(`/api/frames/${encodeURIComponent(name)}/indicators?${query}`);
  }

  fetchQuote(symbol: string): Promise<FrameSummary> {
    return this.request(`/api/quotes/${encodeURIComponent(symbol)}`);
  }

  getConfig(): Promise<{ default_period: number }> {
    return this.request('/api/config');
  }

  setConfig(defaultPeriod: number): Promise<{ default_period: number }> {
    return this.request('/api/config', {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ default_period: defaultPeriod }),
    });
  }
}
