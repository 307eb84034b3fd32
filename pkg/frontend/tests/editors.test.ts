import { describe, expect, it } from "vitest";

import { validateCamera, validateRule, renderRuleEditor } from "../src/views/editors.js";
import type { AlertRule, Camera } from "../src/types.js";

const goodRule: AlertRule = {
  name: "chicks",
  class_ids: [23],
  min_confidence: 0.5,
  cameras: null,
  cooldown_seconds: 300,
  sink_kind: "log",
  sink_target: "",
  enabled: true,
};

describe("validateRule", () => {
  it("accepts a sound rule", () => {
    expect(validateRule(goodRule)).toEqual([]);
  });

  it("rejects min_confidence outside [0, 1]", () => {
    expect(validateRule({ ...goodRule, min_confidence: 1.5 })).not.toEqual([]);
    expect(validateRule({ ...goodRule, min_confidence: -0.1 })).not.toEqual([]);
  });

  it("requires at least one class", () => {
    expect(validateRule({ ...goodRule, class_ids: [] })).not.toEqual([]);
  });

  it("requires a target for webhook sinks", () => {
    expect(validateRule({ ...goodRule, sink_kind: "webhook" })).not.toEqual([]);
    expect(
      validateRule({ ...goodRule, sink_kind: "webhook", sink_target: "http://x" }),
    ).toEqual([]);
  });
});

describe("validateCamera", () => {
  const camera: Camera = {
    camera_id: "camA",
    name: "North",
    smtp_sender: "cama@cams.example",
    ir_sensitivity: "medium",
    location: null,
    active: true,
  };

  it("accepts a sound camera", () => {
    expect(validateCamera(camera)).toEqual([]);
  });

  it("requires an email-shaped sender", () => {
    expect(validateCamera({ ...camera, smtp_sender: "nonsense" })).not.toEqual([]);
  });
});

describe("renderRuleEditor", () => {
  it("renders existing rules and the creation form", () => {
    const host = document.createElement("div");
    host.innerHTML = renderRuleEditor(
      [{ ...goodRule, rule_id: "r1" }],
      [{ class_id: 23, scientific_name: "Numenius arquata chick", common_name: "chick" }],
    );
    expect(host.querySelector("tr[data-rule-id='r1']")).not.toBeNull();
    expect(host.textContent).toContain("Numenius arquata chick");
    expect(host.querySelector("form.rule-form")).not.toBeNull();
  });
});
