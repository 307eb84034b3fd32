import { describe, expect, it } from "vitest";

import { renderReviewItem, renderReviewPane } from "../src/views/review.js";
import type { Detection } from "../src/types.js";
import type { ReviewState } from "../src/review.js";

const detection: Detection = {
  detection_id: "d1",
  asset_id: "asset_d1",
  class_id: 22,
  scientific_name: "Numenius arquata",
  confidence: 0.87,
  box: { x_min: 480, y_min: 268, x_max: 960, y_max: 536 },
  model_version: "1",
  verdict: null,
  image_url: "/api/assets/asset_d1/image",
  asset_width: 1920,
  asset_height: 1072,
};

function render(html: string): HTMLElement {
  const host = document.createElement("div");
  host.innerHTML = html;
  return host;
}

describe("renderReviewItem", () => {
  it("draws the box overlay in image-intrinsic percentages", () => {
    const host = render(renderReviewItem(detection, ""));
    const overlay = host.querySelector<HTMLElement>(".box-overlay");
    expect(overlay).not.toBeNull();
    expect(overlay!.getAttribute("style")).toBe(
      "left:25%;top:25%;width:25%;height:25%",
    );
    expect(host.querySelector("img")!.getAttribute("src")).toBe(
      "/api/assets/asset_d1/image",
    );
    expect(host.textContent).toContain("Numenius arquata");
    expect(host.textContent).toContain("0.87");
  });

  it("omits the overlay when intrinsic size is unknown", () => {
    const bare = { ...detection, asset_width: null, asset_height: null };
    const host = render(renderReviewItem(bare, ""));
    expect(host.querySelector(".box-overlay")).toBeNull();
  });
});

describe("renderReviewPane", () => {
  const state: ReviewState = {
    queue: [detection],
    index: 0,
    submitting: false,
    lastError: null,
    reviewedCount: 3,
  };

  it("shows progress, controls and the species picker", () => {
    const host = render(
      renderReviewPane(state, [
        { class_id: 22, scientific_name: "Numenius arquata", common_name: "Common curlew" },
      ], ""),
    );
    expect(host.textContent).toContain("1 / 1");
    expect(host.querySelector("[data-action='accept']")).not.toBeNull();
    expect(host.querySelector("[data-action='blank']")).not.toBeNull();
    expect(host.querySelector("[data-action='no_good']")).not.toBeNull();
    expect(host.querySelector(".species-picker option")?.textContent).toContain(
      "Numenius arquata",
    );
  });

  it("surfaces the last error as a toast", () => {
    const host = render(
      renderReviewPane({ ...state, lastError: "unknown_class: nope" }, [], ""),
    );
    expect(host.querySelector(".toast.error")?.textContent).toContain("unknown_class");
  });

  it("renders the empty state when the queue is drained", () => {
    const host = render(
      renderReviewPane({ ...state, queue: [], index: 0 }, [], ""),
    );
    expect(host.textContent).toContain("Review queue is empty");
    expect(host.textContent).toContain("3 reviewed");
  });
});
