/** Camera and alert-rule editors, and their client-side validation. */

import { escapeHtml } from "../format.js";
import type { AlertRule, Camera, CatalogEntry } from "../types.js";

export function validateRule(rule: AlertRule): string[] {
  const problems: string[] = [];
  if (rule.class_ids.length === 0) problems.push("pick at least one class");
  if (!(rule.min_confidence >= 0 && rule.min_confidence <= 1)) {
    problems.push("min confidence must be between 0 and 1");
  }
  if (rule.cooldown_seconds < 0) problems.push("cooldown cannot be negative");
  if (rule.sink_kind !== "log" && !rule.sink_target) {
    problems.push(`${rule.sink_kind} sink needs a target`);
  }
  return problems;
}

export function validateCamera(camera: Camera): string[] {
  const problems: string[] = [];
  if (!camera.camera_id) problems.push("camera id is required");
  if (!camera.smtp_sender.includes("@")) problems.push("sender must be an email address");
  return problems;
}

export function renderRuleRow(rule: AlertRule, names: Map<number, string>): string {
  const classes = rule.class_ids
    .map((id) => escapeHtml(names.get(id) ?? `class ${id}`))
    .join(", ");
  return `
    <tr data-rule-id="${escapeHtml(rule.rule_id ?? "")}">
      <td>${escapeHtml(rule.name || rule.rule_id || "")}</td>
      <td>${classes}</td>
      <td>${rule.min_confidence}</td>
      <td>${rule.cameras ? rule.cameras.map(escapeHtml).join(", ") : "all"}</td>
      <td>${rule.cooldown_seconds}s</td>
      <td>${escapeHtml(rule.sink_kind)}${rule.sink_target ? ` → ${escapeHtml(rule.sink_target)}` : ""}</td>
      <td>${rule.enabled ? "on" : "off"}</td>
      <td><button data-action="delete-rule">delete</button></td>
    </tr>`;
}

export function renderRuleEditor(rules: AlertRule[], catalog: CatalogEntry[]): string {
  const names = new Map(catalog.map((c) => [c.class_id, c.scientific_name]));
  const rows = rules.map((rule) => renderRuleRow(rule, names)).join("");
  const options = catalog
    .map((c) => `<option value="${c.class_id}">${escapeHtml(c.scientific_name)}</option>`)
    .join("");
  return `
    <table class="rules" aria-label="alert rules">
      <thead><tr><th>Rule</th><th>Classes</th><th>Min conf</th><th>Cameras</th>
        <th>Cooldown</th><th>Sink</th><th></th><th></th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <form class="rule-form">
      <input name="name" placeholder="rule name" />
      <select name="class_ids" multiple size="4">${options}</select>
      <input name="min_confidence" type="number" min="0" max="1" step="0.01" value="0.5" />
      <select name="sink_kind">
        <option value="log">log</option>
        <option value="webhook">webhook</option>
        <option value="email">email</option>
      </select>
      <input name="sink_target" placeholder="sink target (URL or address)" />
      <input name="cooldown_seconds" type="number" min="0" value="300" />
      <button type="submit">add rule</button>
      <div class="form-errors" role="alert"></div>
    </form>`;
}

export function renderCameraEditor(cameras: Camera[]): string {
  const rows = cameras
    .map(
      (camera) => `
      <tr data-camera-id="${escapeHtml(camera.camera_id)}">
        <td>${escapeHtml(camera.camera_id)}</td>
        <td>${escapeHtml(camera.name)}</td>
        <td>${escapeHtml(camera.smtp_sender)}</td>
        <td>${escapeHtml(camera.ir_sensitivity)}</td>
        <td>${camera.location ? camera.location.join(", ") : "–"}</td>
        <td>${camera.active ? "active" : "inactive"}</td>
        <td><button data-action="delete-camera">delete</button></td>
      </tr>`,
    )
    .join("");
  return `
    <table class="cameras" aria-label="cameras">
      <thead><tr><th>Id</th><th>Name</th><th>Sender</th><th>IR</th>
        <th>Location</th><th></th><th></th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <form class="camera-form">
      <input name="camera_id" placeholder="camera id" required />
      <input name="name" placeholder="name" />
      <input name="smtp_sender" placeholder="sender email" required />
      <select name="ir_sensitivity">
        <option value="low">low</option>
        <option value="medium" selected>medium</option>
        <option value="high">high</option>
      </select>
      <button type="submit">add camera</button>
      <div class="form-errors" role="alert"></div>
    </form>`;
}
