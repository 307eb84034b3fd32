/** Thin typed client over the backend REST API. Every non-2xx response
 * carries the standard error body, surfaced here as ApiError. */

import type {
  Alert,
  AlertRule,
  ApiErrorBody,
  BlanksReport,
  Camera,
  CatalogEntry,
  ConfusionReport,
  ConsoleConfig,
  Detection,
  DetectionPage,
  MetricsReport,
  VerifyBody,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly requestId: string;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.status = body.http_status;
    this.code = body.code;
    this.requestId = body.request_id;
  }
}

export class OfflineError extends Error {}

type Fetch = typeof fetch;

export class Api {
  private readonly base: string;
  private readonly token: string | null;
  readonly reviewer: string;
  private readonly doFetch: Fetch;

  constructor(config: ConsoleConfig, fetchImpl: Fetch = fetch) {
    this.base = config.apiBaseUrl.replace(/\/+$/, "");
    this.token = config.token;
    this.reviewer = config.reviewer;
    this.doFetch = fetchImpl;
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.doFetch(`${this.base}${path}`, {
        method,
        headers: this.headers(body !== undefined),
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch (err) {
      throw new OfflineError(String(err));
    }
    if (response.status === 204) return undefined as T;
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        parsed = {
          http_status: response.status,
          code: "http_error",
          message: response.statusText,
          request_id: "",
        };
      }
      throw new ApiError(parsed);
    }
    return (await response.json()) as T;
  }

  imageUrl(detection: Detection): string {
    return `${this.base}${detection.image_url}`;
  }

  catalog(): Promise<CatalogEntry[]> {
    return this.request("GET", "/api/catalog");
  }

  detections(params: {
    verified?: boolean;
    class_id?: number;
    camera_id?: string;
    cursor?: string;
    limit?: number;
  }): Promise<DetectionPage> {
    const query = new URLSearchParams();
    if (params.verified !== undefined) query.set("verified", String(params.verified));
    if (params.class_id !== undefined) query.set("class_id", String(params.class_id));
    if (params.camera_id !== undefined) query.set("camera_id", params.camera_id);
    if (params.cursor !== undefined) query.set("cursor", params.cursor);
    if (params.limit !== undefined) query.set("limit", String(params.limit));
    const qs = query.toString();
    return this.request("GET", `/api/detections${qs ? `?${qs}` : ""}`);
  }

  verify(detectionId: string, body: VerifyBody): Promise<Detection> {
    return this.request("POST", `/api/detections/${detectionId}/verify`, body);
  }

  metrics(reference = false): Promise<MetricsReport> {
    return this.request(
      "GET",
      `/api/reports/metrics${reference ? "?reference=builtin" : ""}`,
    );
  }

  confusion(): Promise<ConfusionReport> {
    return this.request("GET", "/api/reports/confusion");
  }

  blanks(): Promise<BlanksReport> {
    return this.request("GET", "/api/reports/blanks");
  }

  alerts(): Promise<Alert[]> {
    return this.request("GET", "/api/alerts");
  }

  cameras(): Promise<Camera[]> {
    return this.request("GET", "/api/cameras");
  }

  saveCamera(camera: Camera, isNew: boolean): Promise<Camera> {
    return isNew
      ? this.request("POST", "/api/cameras", camera)
      : this.request("PUT", `/api/cameras/${camera.camera_id}`, camera);
  }

  deleteCamera(cameraId: string): Promise<void> {
    return this.request("DELETE", `/api/cameras/${cameraId}`);
  }

  rules(): Promise<AlertRule[]> {
    return this.request("GET", "/api/alert-rules");
  }

  saveRule(rule: AlertRule): Promise<AlertRule> {
    return rule.rule_id
      ? this.request("PUT", `/api/alert-rules/${rule.rule_id}`, rule)
      : this.request("POST", "/api/alert-rules", rule);
  }

  deleteRule(ruleId: string): Promise<void> {
    return this.request("DELETE", `/api/alert-rules/${ruleId}`);
  }
}

export async function loadConfig(fetchImpl: Fetch = fetch): Promise<ConsoleConfig> {
  try {
    const response = await fetchImpl("/config.json");
    if (response.ok) {
      const raw = (await response.json()) as Partial<ConsoleConfig>;
      return {
        apiBaseUrl: raw.apiBaseUrl ?? "",
        token: raw.token ?? null,
        reviewer: raw.reviewer ?? "console",
      };
    }
  } catch {
    // fall through to defaults: same-origin API, anonymous
  }
  return { apiBaseUrl: "", token: null, reviewer: "console" };
}
