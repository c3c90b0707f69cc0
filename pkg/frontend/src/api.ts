/** Typed client for the exploration service.
 *
 * The UI never computes statistics itself: every number it shows comes
 * out of one of these calls.
 */

export interface HypothesisSummary {
  rows: number[];
  cols: number[];
  partition: number[][];
  k: number;
}

export interface SessionSummary {
  id: string;
  n: number;
  m: number;
  col_names: string[];
  side_cols: string[];
  seed: number;
  tile_count: number;
  event_count: number;
  hypothesis: HypothesisSummary | null;
  gain: number | null;
}

export interface CoordsBlock {
  shape: number[];
  values: number[];
}

export interface AxisLabel {
  name: string;
  value: number;
}

export interface ViewResponse {
  gain: number;
  degenerate: boolean;
  truncated: boolean;
  directions: number[][];
  gains: number[];
  floor: number;
  axis_labels: AxisLabel[][];
  coords_data: CoordsBlock;
  samples_h1: CoordsBlock[];
  samples_h2: CoordsBlock[];
  focus_rows: number[];
}

export interface ColumnRatio {
  name: string;
  selection_std: number;
  global_std: number;
  ratio: number | null;
  chosen: boolean;
}

export interface AttributeReport {
  tau: number;
  columns: ColumnRatio[];
}

export interface TileResponse {
  report: AttributeReport;
  tile: { rows: number[]; cols: number[] };
  tile_count: number;
}

export interface PcpResponse {
  columns: string[];
  values: CoordsBlock;
  selection: number[];
  report: AttributeReport;
}

export interface CrosstabResponse {
  column: string;
  counts: Record<string, number>;
  total: number;
}

export interface FactorResponse {
  column: string;
  values: string[];
  categories: string[];
}

export interface HypothesisBody {
  rows: number[] | "all";
  cols: number[] | "all";
  partition: number[][] | "singletons" | "whole";
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  createSession(body: {
    builtin?: string;
    csv_ref?: string;
    seed?: number;
    data_seed?: number;
  }): Promise<SessionSummary> {
    return request(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionSummary> {
    return request(this.url(`/sessions/${id}`));
  }

  setHypothesis(id: string, body: HypothesisBody): Promise<SessionSummary> {
    return request(this.url(`/sessions/${id}/hypothesis`), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getView(id: string, samples = 1): Promise<ViewResponse> {
    return request(this.url(`/sessions/${id}/view?samples=${samples}`));
  }

  postTile(id: string, rows: number[], tau: number): Promise<TileResponse> {
    return request(this.url(`/sessions/${id}/tiles`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rows, tau }),
    });
  }

  getPcp(id: string, rows: number[], tau: number): Promise<PcpResponse> {
    const params = new URLSearchParams({ rows: rows.join(","), tau: String(tau) });
    return request(this.url(`/sessions/${id}/pcp?${params}`));
  }

  getCrosstab(id: string, col: string, rows: number[]): Promise<CrosstabResponse> {
    const params = new URLSearchParams({ col, rows: rows.join(",") });
    return request(this.url(`/sessions/${id}/crosstab?${params}`));
  }

  getFactor(id: string, col: string): Promise<FactorResponse> {
    const params = new URLSearchParams({ col });
    return request(this.url(`/sessions/${id}/factor?${params}`));
  }
}

/** Unpack a flat coordinate block into per-row [x, y] pairs. */
export function decodeCoords(block: CoordsBlock): Array<[number, number]> {
  const [n, k] = block.shape;
  const out: Array<[number, number]> = [];
  for (let i = 0; i < n; i++) {
    out.push([block.values[i * k], k > 1 ? block.values[i * k + 1] : 0]);
  }
  return out;
}
