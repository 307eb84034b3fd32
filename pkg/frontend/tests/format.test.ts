import { describe, expect, it } from "vitest";

import { confidence, escapeHtml, fraction, heatAlpha, pct, timestamp } from "../src/format.js";

describe("pct", () => {
  it("formats API percentages without changing the value", () => {
    expect(pct(90.56)).toBe("90.56%");
    expect(pct(100)).toBe("100.00%");
    expect(pct(0)).toBe("0.00%");
  });

  it("shows a dash for undefined metrics", () => {
    expect(pct(null)).toBe("–");
    expect(pct(undefined)).toBe("–");
  });

  it("round-trips the payload number exactly", () => {
    for (const value of [90.56, 92.35, 95.05, 96.03, 93.56, 97.67]) {
      expect(parseFloat(pct(value))).toBe(value);
    }
  });
});

describe("fraction", () => {
  it("renders a 0..1 fraction as a percentage", () => {
    expect(fraction(0.5)).toBe("50.00%");
    expect(fraction(null)).toBe("–");
  });
});

describe("confidence", () => {
  it("keeps two decimals", () => {
    expect(confidence(0.87)).toBe("0.87");
  });
});

describe("timestamp", () => {
  it("humanizes RFC 3339", () => {
    expect(timestamp("2024-05-20T10:30:00Z")).toBe("2024-05-20 10:30:00 UTC");
    expect(timestamp("2024-05-20T10:30:00.123456+00:00")).toBe("2024-05-20 10:30:00 UTC");
  });
});

describe("escapeHtml", () => {
  it("neutralizes markup", () => {
    expect(escapeHtml(`<img src="x">&`)).toBe("&lt;img src=&quot;x&quot;&gt;&amp;");
  });
});

describe("heatAlpha", () => {
  it("is zero for empty cells and full for the row maximum", () => {
    expect(heatAlpha(0, 600)).toBe(0);
    expect(heatAlpha(600, 600)).toBe(1);
    expect(heatAlpha(30, 600)).toBeGreaterThan(0);
    expect(heatAlpha(30, 600)).toBeLessThan(1);
  });
});
