/** Display formatting. Metric numbers come fully computed from the API;
 * nothing here may change a value, only dress it. */

export function pct(value: number | null | undefined): string {
  if (value === null || value === undefined) return "–";
  return `${value.toFixed(2)}%`;
}

export function fraction(value: number | null): string {
  if (value === null) return "–";
  return `${(value * 100).toFixed(2)}%`;
}

export function confidence(value: number): string {
  return value.toFixed(2);
}

export function timestamp(iso: string): string {
  return iso.replace("T", " ").replace(/(\.\d+)?(\+00:00|Z)$/, " UTC");
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Heat shading for confusion cells: 0 count stays white, the row maximum
 * is fully saturated. Pure presentation, no derived numbers. */
export function heatAlpha(count: number, rowMax: number): number {
  if (count <= 0 || rowMax <= 0) return 0;
  return Math.max(0.12, Math.min(1, count / rowMax));
}
