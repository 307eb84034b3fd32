/** Dashboard rendering: metrics table, confusion heatmap, blank-rate tile,
 * live alert feed. Pure functions from API payloads to HTML; every number
 * shown comes straight off the wire. */

import { escapeHtml, fraction, heatAlpha, pct, timestamp } from "../format.js";
import type {
  Alert,
  BlanksReport,
  ConfusionReport,
  MetricsReport,
} from "../types.js";

export function renderMetricsTable(report: MetricsReport): string {
  const rows = report.classes
    .map(
      (row) => `
      <tr data-class-id="${row.class_id}">
        <td class="species">${escapeHtml(row.scientific_name ?? `class ${row.class_id}`)}</td>
        <td data-metric="accuracy">${pct(row.accuracy)}</td>
        <td data-metric="precision">${pct(row.precision)}</td>
        <td data-metric="sensitivity">${pct(row.sensitivity)}</td>
        <td data-metric="specificity">${pct(row.specificity)}</td>
        <td data-metric="f1">${pct(row.f1)}</td>
      </tr>`,
    )
    .join("");
  const averages = report.averages
    ? `
      <tr class="averages">
        <td>average (${escapeHtml(report.averages.policy)})</td>
        <td>${pct(report.averages.accuracy)}</td>
        <td>${pct(report.averages.precision)}</td>
        <td>${pct(report.averages.sensitivity)}</td>
        <td>${pct(report.averages.specificity)}</td>
        <td>${pct(report.averages.f1)}</td>
      </tr>`
    : "";
  return `
    <table class="metrics" aria-label="per-class metrics">
      <thead>
        <tr><th>Class</th><th>Accuracy</th><th>Precision</th><th>Sensitivity</th>
            <th>Specificity</th><th>F1</th></tr>
      </thead>
      <tbody>${rows}${averages}</tbody>
    </table>
    <p class="note">${report.evaluated} reviewed detections;
      ${report.unverified_excluded} unverified and
      ${report.no_good_excluded} no-good excluded.</p>`;
}

export function renderReferenceTable(report: MetricsReport): string {
  if (!report.reference || report.reference.length === 0) return "";
  const rows = report.reference
    .map(
      (row) => `
      <tr class="${row.consistent ? "ok" : "mismatch"}">
        <td>${escapeHtml(row.scope)}</td>
        <td>${escapeHtml(row.metric)}</td>
        <td>${pct(row.reported)}</td>
        <td>${pct(row.derived)}</td>
        <td>${row.consistent ? "OK" : "MISMATCH"}</td>
      </tr>`,
    )
    .join("");
  return `
    <details class="reference">
      <summary>Reported vs derived figures</summary>
      <table aria-label="reference reconciliation">
        <thead><tr><th>Scope</th><th>Metric</th><th>Reported</th><th>Derived</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
    </details>`;
}

export function renderConfusionHeatmap(report: ConfusionReport): string {
  if (report.classes.length === 0) {
    return `<p class="empty">No reviewed detections yet.</p>`;
  }
  const names = report.classes.map(
    (c) => c.scientific_name ?? `class ${c.class_id}`,
  );
  const header =
    `<tr><th>actual \\ predicted</th>` +
    names.map((n) => `<th>${escapeHtml(n)}</th>`).join("") +
    `<th>total</th></tr>`;
  const body = report.matrix
    .map((row, i) => {
      const rowMax = Math.max(...row, 1);
      const cells = row
        .map((count, j) => {
          const actual = report.classes[i]!.class_id;
          const predicted = report.classes[j]!.class_id;
          return `<td data-actual="${actual}" data-predicted="${predicted}"
            style="background:rgba(31,119,80,${heatAlpha(count, rowMax)})">${count}</td>`;
        })
        .join("");
      return `<tr><th>${escapeHtml(names[i]!)}</th>${cells}<td class="total">${report.row_totals[i]}</td></tr>`;
    })
    .join("");
  const background = report.background_row
    ? `<tr><th>(blank)</th>${report.background_row
        .map((count) => `<td class="background">${count}</td>`)
        .join("")}<td class="total">${report.background_row.reduce((a, b) => a + b, 0)}</td></tr>`
    : "";
  const totals =
    `<tr class="totals"><th>total</th>` +
    report.col_totals.map((t) => `<td>${t}</td>`).join("") +
    `<td>${report.grand_total}</td></tr>`;
  return `
    <table class="confusion" aria-label="confusion matrix">
      <thead>${header}</thead>
      <tbody>${body}${background}${totals}</tbody>
    </table>`;
}

export function renderBlankTile(report: BlanksReport): string {
  return `
    <div class="tile" aria-label="blank rate">
      <div class="tile-number">${fraction(report.blank_fraction)}</div>
      <div class="tile-caption">blank images
        (${report.blank_assets} of ${report.total_assets})</div>
    </div>`;
}

export function renderAlertFeed(alerts: Alert[], names: Map<number, string>): string {
  if (alerts.length === 0) {
    return `<p class="empty">No alerts yet.</p>`;
  }
  const items = alerts
    .map(
      (alert) => `
      <li class="alert ${escapeHtml(alert.delivery_status)}">
        <span class="when">${timestamp(alert.fired_at)}</span>
        <span class="what">${escapeHtml(names.get(alert.class_id) ?? `class ${alert.class_id}`)}</span>
        <span class="where">${escapeHtml(alert.camera_id ?? "batch upload")}</span>
        <span class="status">${escapeHtml(alert.delivery_status)}</span>
      </li>`,
    )
    .join("");
  return `<ul class="alert-feed" aria-label="alert feed">${items}</ul>`;
}
