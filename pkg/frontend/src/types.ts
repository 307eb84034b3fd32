/** Payload shapes of the backend REST API (snake_case, RFC 3339 times). */

export interface CatalogEntry {
  class_id: number;
  scientific_name: string;
  common_name: string;
}

export interface Box {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
}

export interface Verdict {
  true_class_id: number | null;
  sentinel: "BLANK" | "NO_GOOD" | null;
  reviewer: string;
  reviewed_at: string;
}

export interface Detection {
  detection_id: string;
  asset_id: string;
  class_id: number;
  scientific_name: string | null;
  confidence: number;
  box: Box;
  model_version: string;
  verdict: Verdict | null;
  image_url: string;
  asset_width: number | null;
  asset_height: number | null;
}

export interface DetectionPage {
  items: Detection[];
  next_cursor: string | null;
}

export interface VerifyBody {
  true_class_id?: number;
  sentinel?: "BLANK" | "NO_GOOD";
  reviewer: string;
}

export interface ClassMetricsRow {
  class_id: number;
  scientific_name: string | null;
  tp: number;
  fp: number;
  tn: number;
  fn: number;
  accuracy: number | null;
  precision: number | null;
  sensitivity: number | null;
  specificity: number | null;
  f1: number | null;
}

export interface MetricsAverages {
  policy: string;
  accuracy: number | null;
  precision: number | null;
  sensitivity: number | null;
  specificity: number | null;
  f1: number | null;
}

export interface ReferenceRow {
  scope: string;
  metric: string;
  reported: number;
  derived: number | null;
  consistent: boolean;
}

export interface MetricsReport {
  from: string | null;
  to: string | null;
  evaluated: number;
  unverified_excluded: number;
  no_good_excluded: number;
  classes: ClassMetricsRow[];
  averages: MetricsAverages | null;
  reference?: ReferenceRow[];
}

export interface ConfusionReport {
  classes: { class_id: number; scientific_name: string | null }[];
  matrix: number[][];
  background_row: number[] | null;
  row_totals: number[];
  col_totals: number[];
  grand_total: number;
  unverified_excluded: number;
  no_good_excluded: number;
}

export interface BlanksReport {
  total_assets: number;
  blank_assets: number;
  blank_fraction: number | null;
}

export interface Camera {
  camera_id: string;
  name: string;
  smtp_sender: string;
  ir_sensitivity: "low" | "medium" | "high";
  location: [number, number] | null;
  active: boolean;
}

export interface AlertRule {
  rule_id?: string;
  name: string;
  class_ids: number[];
  min_confidence: number;
  cameras: string[] | null;
  cooldown_seconds: number;
  sink_kind: "webhook" | "email" | "log";
  sink_target: string;
  enabled: boolean;
}

export interface Alert {
  alert_id: string;
  rule_id: string;
  detection_id: string;
  camera_id: string | null;
  class_id: number;
  fired_at: string;
  delivery_status: string;
  attempts: number;
}

export interface ApiErrorBody {
  http_status: number;
  code: string;
  message: string;
  request_id: string;
}

export interface ConsoleConfig {
  apiBaseUrl: string;
  token: string | null;
  reviewer: string;
}
