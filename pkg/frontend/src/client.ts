/**
 * HTTP client for the recognition service.
 *
 * All pipeline math lives server-side; this module only moves JSON. The
 * recognize path keeps a single request in flight: a newer submission
 * aborts the pending one, whose caller sees a "superseded" outcome instead
 * of a stale result.
 */

export interface CriticalPointReport {
  index: number;
  kind: string;
}

export interface StrokeReport {
  stroke: number;
  direction: string;
  critical_points: CriticalPointReport[];
  tokens: [number, number][];
}

export interface TokenFeatureReport {
  stroke: number;
  token: number;
  start: number;
  end: number;
  ratio_pct: number;
  category: string;
  direction_deg: number;
  midpoint: [number, number];
  orientation: string;
}

export interface RecognizeResponse {
  label: string;
  confidence: number;
  cluster_id: number;
  scores: Record<string, number>;
  strokes: StrokeReport[];
  features: TokenFeatureReport[];
}

export interface ModelManifest {
  clusters: Record<string, { class_labels: string[]; layer_sizes: number[] }>;
  config: Record<string, unknown>;
}

export type RecognizeOutcome =
  | { kind: "ok"; response: RecognizeResponse }
  | { kind: "superseded" }
  | { kind: "http_error"; status: number; detail: string }
  | { kind: "network_error"; message: string };

export interface EchoResult {
  status: number;
  strokes?: number[][][];
  detail?: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function bodyDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* non-JSON error body: fall through to the status text */
  }
  return response.statusText || `HTTP ${response.status}`;
}

export class PadClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private inflight: AbortController | null = null;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    const impl = fetchImpl ?? fetch;
    // Call unbound so the global fetch is not invoked as a method of this
    // client (browsers reject that with "Illegal invocation").
    this.fetchImpl = (input, init) => impl(input, init);
  }

  /**
   * POST the stroke payload to /api/recognize. Only one request is in
   * flight at a time: calling again aborts the pending request, which then
   * resolves as {kind: "superseded"}.
   */
  async recognize(strokes: number[][][]): Promise<RecognizeOutcome> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/recognize`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ strokes }),
        signal: controller.signal,
      });
      if (!response.ok) {
        return { kind: "http_error", status: response.status, detail: await bodyDetail(response) };
      }
      const parsed = (await response.json()) as RecognizeResponse;
      return { kind: "ok", response: parsed };
    } catch (error) {
      if (controller.signal.aborted) return { kind: "superseded" };
      return { kind: "network_error", message: error instanceof Error ? error.message : String(error) };
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  /** POST to /api/echo: the service parses and returns the strokes unchanged. */
  async echo(strokes: number[][][]): Promise<EchoResult> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/echo`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ strokes }),
    });
    if (!response.ok) return { status: response.status, detail: await bodyDetail(response) };
    const body = (await response.json()) as { strokes: number[][][] };
    return { status: response.status, strokes: body.strokes };
  }

  /** GET /api/health; resolves false when the service has no model loaded. */
  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  /** GET /api/model, or null when no model is loaded / service unreachable. */
  async model(): Promise<ModelManifest | null> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/model`);
      if (!response.ok) return null;
      return (await response.json()) as ModelManifest;
    } catch {
      return null;
    }
  }
}
