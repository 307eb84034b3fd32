/** Console entry point: tab shell, data loading and event wiring. */

import { Api, loadConfig, OfflineError } from "./api.js";
import { escapeHtml } from "./format.js";
import { ReviewFlow } from "./review.js";
import type { CatalogEntry } from "./types.js";
import {
  renderAlertFeed,
  renderBlankTile,
  renderConfusionHeatmap,
  renderMetricsTable,
  renderReferenceTable,
} from "./views/dashboard.js";
import { renderCameraEditor, renderRuleEditor, validateCamera, validateRule } from "./views/editors.js";
import { renderReviewPane } from "./views/review.js";

const TABS = ["review", "dashboard", "cameras", "rules"] as const;
type Tab = (typeof TABS)[number];

class Console {
  private tab: Tab = "review";
  private catalog: CatalogEntry[] = [];
  private flow: ReviewFlow;
  private offline = false;

  constructor(
    private readonly api: Api,
    private readonly root: HTMLElement,
  ) {
    this.flow = new ReviewFlow(api, () => this.renderTab());
  }

  async start(): Promise<void> {
    this.renderShell();
    try {
      this.catalog = await this.api.catalog();
      await this.flow.refresh();
    } catch (err) {
      this.offline = err instanceof OfflineError;
      this.renderTab();
    }
    document.addEventListener("keydown", (event) => {
      if (this.tab !== "review") return;
      const target = event.target as HTMLElement | null;
      if (target && ["INPUT", "SELECT", "TEXTAREA"].includes(target.tagName)) return;
      void this.flow.handleKey(event.key);
    });
    window.setInterval(() => {
      if (this.tab === "dashboard") void this.renderDashboard();
    }, 5000);
    this.renderTab();
  }

  private renderShell(): void {
    const tabs = TABS.map(
      (tab) => `<button data-tab="${tab}" class="tab">${tab}</button>`,
    ).join("");
    this.root.innerHTML = `
      <header>
        <h1>camtrap console</h1>
        <nav>${tabs}</nav>
        <div id="offline-banner" class="offline" hidden>API unreachable</div>
      </header>
      <main id="tab-content"></main>`;
    this.root.querySelectorAll<HTMLButtonElement>("[data-tab]").forEach((button) => {
      button.addEventListener("click", () => {
        this.tab = button.dataset.tab as Tab;
        void this.renderTab();
      });
    });
  }

  private content(): HTMLElement {
    return this.root.querySelector("#tab-content") as HTMLElement;
  }

  private setOffline(flag: boolean): void {
    this.offline = flag;
    const banner = this.root.querySelector<HTMLElement>("#offline-banner");
    if (banner) banner.hidden = !flag;
  }

  private async guard<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      this.setOffline(false);
      return result;
    } catch (err) {
      if (err instanceof OfflineError) {
        this.setOffline(true);
        return null;
      }
      this.content().insertAdjacentHTML(
        "afterbegin",
        `<div class="toast error" role="alert">${escapeHtml(String(err))}</div>`,
      );
      return null;
    }
  }

  private renderTab(): void {
    switch (this.tab) {
      case "review":
        this.renderReview();
        break;
      case "dashboard":
        void this.renderDashboard();
        break;
      case "cameras":
        void this.renderCameras();
        break;
      case "rules":
        void this.renderRules();
        break;
    }
  }

  private renderReview(): void {
    this.content().innerHTML = renderReviewPane(this.flow.state, this.catalog, "");
    this.content()
      .querySelectorAll<HTMLButtonElement>("[data-action]")
      .forEach((button) => {
        button.addEventListener("click", () => {
          const action = button.dataset.action;
          if (action === "accept") void this.flow.submit({ kind: "accept" });
          else if (action === "blank") void this.flow.submit({ kind: "blank" });
          else if (action === "no_good") void this.flow.submit({ kind: "no_good" });
          else if (action === "species") {
            const picker =
              this.content().querySelector<HTMLSelectElement>(".species-picker");
            if (picker) {
              void this.flow.submit({ kind: "species", classId: Number(picker.value) });
            }
          }
        });
      });
  }

  private async renderDashboard(): Promise<void> {
    const data = await this.guard(async () => {
      const [metrics, confusion, blanks, alerts] = await Promise.all([
        this.api.metrics(true),
        this.api.confusion(),
        this.api.blanks(),
        this.api.alerts(),
      ]);
      return { metrics, confusion, blanks, alerts };
    });
    if (!data) return;
    const names = new Map(this.catalog.map((c) => [c.class_id, c.scientific_name]));
    this.content().innerHTML = `
      <section class="tiles">${renderBlankTile(data.blanks)}</section>
      <section>${renderMetricsTable(data.metrics)}${renderReferenceTable(data.metrics)}</section>
      <section>${renderConfusionHeatmap(data.confusion)}</section>
      <section><h2>Alerts</h2>${renderAlertFeed(data.alerts, names)}</section>`;
  }

  private async renderCameras(): Promise<void> {
    const cameras = await this.guard(() => this.api.cameras());
    if (!cameras) return;
    this.content().innerHTML = renderCameraEditor(cameras);
    const form = this.content().querySelector<HTMLFormElement>(".camera-form");
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const values = new FormData(form);
      const camera = {
        camera_id: String(values.get("camera_id") ?? ""),
        name: String(values.get("name") ?? "") || String(values.get("camera_id") ?? ""),
        smtp_sender: String(values.get("smtp_sender") ?? ""),
        ir_sensitivity: String(values.get("ir_sensitivity") ?? "medium") as
          | "low" | "medium" | "high",
        location: null,
        active: true,
      };
      const problems = validateCamera(camera);
      const errors = form.querySelector(".form-errors") as HTMLElement;
      if (problems.length > 0) {
        errors.textContent = problems.join("; ");
        return;
      }
      void this.guard(() => this.api.saveCamera(camera, true)).then(() =>
        this.renderCameras(),
      );
    });
    this.content()
      .querySelectorAll<HTMLButtonElement>("[data-action='delete-camera']")
      .forEach((button) => {
        button.addEventListener("click", () => {
          const row = button.closest("tr") as HTMLElement;
          void this.guard(() =>
            this.api.deleteCamera(row.dataset.cameraId as string),
          ).then(() => this.renderCameras());
        });
      });
  }

  private async renderRules(): Promise<void> {
    const rules = await this.guard(() => this.api.rules());
    if (!rules) return;
    this.content().innerHTML = renderRuleEditor(rules, this.catalog);
    const form = this.content().querySelector<HTMLFormElement>(".rule-form");
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const select = form.querySelector<HTMLSelectElement>("[name='class_ids']");
      const classIds = Array.from(select?.selectedOptions ?? []).map((o) =>
        Number(o.value),
      );
      const values = new FormData(form);
      const rule = {
        name: String(values.get("name") ?? ""),
        class_ids: classIds,
        min_confidence: Number(values.get("min_confidence") ?? "0.5"),
        cameras: null,
        cooldown_seconds: Number(values.get("cooldown_seconds") ?? "300"),
        sink_kind: String(values.get("sink_kind") ?? "log") as "webhook" | "email" | "log",
        sink_target: String(values.get("sink_target") ?? ""),
        enabled: true,
      };
      const problems = validateRule(rule);
      const errors = form.querySelector(".form-errors") as HTMLElement;
      if (problems.length > 0) {
        errors.textContent = problems.join("; ");
        return;
      }
      void this.guard(() => this.api.saveRule(rule)).then(() => this.renderRules());
    });
    this.content()
      .querySelectorAll<HTMLButtonElement>("[data-action='delete-rule']")
      .forEach((button) => {
        button.addEventListener("click", () => {
          const row = button.closest("tr") as HTMLElement;
          void this.guard(() => this.api.deleteRule(row.dataset.ruleId as string)).then(
            () => this.renderRules(),
          );
        });
      });
  }
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new Api(config);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  await new Console(api, root).start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}

export { Console, boot };
