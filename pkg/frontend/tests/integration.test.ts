// @vitest-environment node
/** Live integration against a real seeded backend.
 *
 * Spawns the backend seeder (field-trial confusion counts plus one
 * unverified detection), drives it purely through the HTTP client, and
 * checks the console's two ends of the contract: the dashboard data is
 * served exactly as the fixtures promise, and pushing a verdict through
 * the review flow changes the next metrics response.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Api } from "../src/api.js";
import { ReviewFlow } from "../src/review.js";

const SEEDER = join(__dirname, "..", "scripts", "seed_backend.py");

function pythonAvailable(): boolean {
  const probe = spawnSync("python3", ["-c", "import camtrap"], { timeout: 30000 });
  return probe.status === 0;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no address"));
      }
    });
  });
}

const hasBackend = pythonAvailable();
const suite = hasBackend ? describe : describe.skip;

suite("console against a live seeded backend", () => {
  let proc: ChildProcess;
  let api: Api;

  beforeAll(async () => {
    const apiPort = await freePort();
    const smtpPort = await freePort();
    const dataDir = mkdtempSync(join(tmpdir(), "camtrap-console-"));
    proc = spawn("python3", [
      SEEDER,
      "--api-port", String(apiPort),
      "--smtp-port", String(smtpPort),
      "--data-dir", dataDir,
    ]);
    await new Promise<void>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("backend never became ready")), 50000);
      proc.stdout!.on("data", (chunk: Buffer) => {
        if (chunk.toString().includes("READY")) {
          clearTimeout(timer);
          resolve();
        }
      });
      proc.on("exit", (code) => reject(new Error(`seeder exited early (${code})`)));
    });
    api = new Api({
      apiBaseUrl: `http://127.0.0.1:${apiPort}`,
      token: null,
      reviewer: "console-test",
    });
  }, 60000);

  afterAll(() => {
    proc?.kill("SIGTERM");
  });

  it("serves the field-trial numbers the dashboard renders", async () => {
    const confusion = await api.confusion();
    const ids = confusion.classes.map((c) => c.class_id);
    const i22 = ids.indexOf(22);
    expect(confusion.matrix[i22]![i22]).toBe(662);

    const metrics = await api.metrics();
    const row22 = metrics.classes.find((c) => c.class_id === 22)!;
    expect(row22.sensitivity).toBe(90.56);
    expect(row22.f1).toBe(95.05);
  });

  it("review-flow verdicts change the next metrics response", async () => {
    const before = await api.metrics();

    const flow = new ReviewFlow(api);
    await flow.refresh();
    expect(flow.state.queue.length).toBeGreaterThan(0);
    const submitted = await flow.submit({ kind: "accept" });
    expect(submitted).toBe(true);

    const after = await api.metrics();
    expect(after.evaluated).toBe(before.evaluated + 1);
    expect(after).not.toEqual(before);
    // accepting a class-22 prediction as class 22 adds one TP
    const row22Before = before.classes.find((c) => c.class_id === 22)!;
    const row22After = after.classes.find((c) => c.class_id === 22)!;
    expect(row22After.tp).toBe(row22Before.tp + 1);
  });

  it("surfaces API refusals through the flow", async () => {
    const flow = new ReviewFlow(api);
    await flow.refresh();
    if (flow.state.queue.length === 0) return; // queue drained by earlier test
    const submitted = await flow.submit({ kind: "species", classId: 9999 });
    expect(submitted).toBe(false);
    expect(flow.state.lastError).toContain("unknown_class");
  });
});
