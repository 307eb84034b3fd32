/** Review pane rendering: the image with its box overlay, the verdict
 * controls and the species picker. */

import { confidence, escapeHtml } from "../format.js";
import { overlayRect, overlayStyle } from "../overlay.js";
import type { ReviewState } from "../review.js";
import type { CatalogEntry, Detection } from "../types.js";

export function renderReviewItem(detection: Detection, imageBase: string): string {
  // boxes are in image-intrinsic pixels; the API reports the intrinsic
  // size, so the overlay is pure percentages and scales with the CSS
  const overlay =
    detection.asset_width && detection.asset_height
      ? `<div class="box-overlay" style="${overlayStyle(
          overlayRect(detection.box, detection.asset_width, detection.asset_height),
        )}"></div>`
      : "";
  return `
    <figure class="review-image">
      <img src="${escapeHtml(imageBase + detection.image_url)}" alt="detection" />
      ${overlay}
    </figure>
    <div class="prediction">
      <span class="species">${escapeHtml(detection.scientific_name ?? String(detection.class_id))}</span>
      <span class="confidence">${confidence(detection.confidence)}</span>
    </div>`;
}

export function renderSpeciesPicker(catalog: CatalogEntry[]): string {
  const options = catalog
    .map(
      (entry) =>
        `<option value="${entry.class_id}">${escapeHtml(entry.scientific_name)} (${escapeHtml(
          entry.common_name,
        )})</option>`,
    )
    .join("");
  return `
    <select class="species-picker" aria-label="species">${options}</select>
    <button data-action="species">set species</button>`;
}

export function renderReviewPane(
  state: ReviewState,
  catalog: CatalogEntry[],
  imageBase: string,
): string {
  if (state.queue.length === 0) {
    return `
      <div class="review-empty">
        <p>Review queue is empty. ${state.reviewedCount} reviewed this session.</p>
      </div>`;
  }
  const detection = state.queue[state.index]!;
  const error = state.lastError
    ? `<div class="toast error" role="alert">${escapeHtml(state.lastError)}</div>`
    : "";
  return `
    ${error}
    <div class="review-progress">${state.index + 1} / ${state.queue.length}
      (reviewed ${state.reviewedCount})</div>
    ${renderReviewItem(detection, imageBase)}
    <div class="verdict-controls">
      <button data-action="accept" title="a / Enter">accept as predicted</button>
      <button data-action="blank" title="b">blank</button>
      <button data-action="no_good" title="g">no good</button>
      ${renderSpeciesPicker(catalog)}
    </div>`;
}
