// @vitest-environment happy-dom
// @vitest-environment-options {"url": "http://127.0.0.1:18731"}

// The page URL above matches the server address: the browser fetches
// same-origin, exactly as when the UI is served from --static-dir.

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { createApp, type App } from "../src/app.js";
import { NS, clickAction, settle } from "./helpers.js";

const run = promisify(execFile);

const PORT = 18731;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let cacheDir = "";
let serverLog = "";

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 25000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/api/v1/concerns`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error(`server did not come up on ${BASE}\n${serverLog}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  cacheDir = await mkdtemp(join(tmpdir(), "agilekb-ui-"));
  server = spawn("agilekb", ["serve", "--port", String(PORT), "--cache-dir", cacheDir], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  server.stdout?.on("data", (chunk: Buffer) => {
    serverLog += chunk.toString();
  });
  server.stderr?.on("data", (chunk: Buffer) => {
    serverLog += chunk.toString();
  });
  await waitForServer();
});

afterAll(async () => {
  if (server !== null) {
    const gone = new Promise((resolve) => server?.once("exit", resolve));
    server.kill("SIGTERM");
    await gone;
  }
  await rm(cacheDir, { recursive: true, force: true });
});

describe("against a live knowledge base", () => {
  async function bootApp(): Promise<{ root: HTMLElement; app: App }> {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById("app") as HTMLElement;
    const app = createApp(root, new ApiClient(BASE, (input, init) => fetch(input, init)));
    await app.boot();
    await settle();
    return { root, app };
  }

  it("loads the real concern list and catalog", async () => {
    const { app } = await bootApp();

    expect(app.state.loadError).toBeNull();
    expect(app.state.concerns.map((concern) => concern.id)).toContain("practices-overview");
    expect(app.state.catalog?.goals.length).toBe(16);
    expect(app.state.catalog?.factors.length).toBe(13);
  });

  it("recommends daily meetings for a communication-minded team", async () => {
    const { root, app } = await bootApp();

    clickAction(root, '[data-action="nav"][data-page="inputGoals"]');
    const boxes = [...root.querySelectorAll<HTMLInputElement>('input[data-action="toggle-goal"]')];
    expect(boxes.length).toBe(16);
    const communication = boxes.find(
      (box) => box.getAttribute("data-iri") === NS + "Communication_Goal",
    );
    expect(communication).toBeDefined();
    communication?.dispatchEvent(new MouseEvent("click", { bubbles: true }));

    clickAction(root, '[data-action="calculate"]');
    const deadline = Date.now() + 15000;
    while (app.state.pending || (app.state.report === null && app.state.reportError === null)) {
      if (Date.now() > deadline) throw new Error("calculation did not finish");
      await new Promise((resolve) => setTimeout(resolve, 50));
    }
    await settle();

    expect(app.state.reportError).toBeNull();
    expect(app.state.page).toBe("results");
    const recommended = [
      ...root.querySelectorAll('table[data-advice="rec"] tr.advice-row .term-iri'),
    ].map((cell) => cell.getAttribute("title"));
    expect(recommended).toContain(NS + "DailyMeetings");
  });

  it("flags daily meetings for a distributed team that wants communication", async () => {
    const { root, app } = await bootApp();

    clickAction(root, '[data-action="nav"][data-page="inputGoals"]');
    const goal = [...root.querySelectorAll<HTMLInputElement>('input[data-action="toggle-goal"]')]
      .find((box) => box.getAttribute("data-iri") === NS + "Communication_Goal");
    goal?.dispatchEvent(new MouseEvent("click", { bubbles: true }));

    clickAction(root, '[data-action="nav"][data-page="inputSituations"]');
    const factor = root.querySelector<HTMLSelectElement>(
      'select[data-factor="team-distribution"]',
    );
    expect(factor).not.toBeNull();
    if (factor !== null) {
      factor.value = NS + "Distributed_Team";
      factor.dispatchEvent(new Event("change", { bubbles: true }));
    }

    await app.calculate();
    await settle();

    expect(app.state.reportError).toBeNull();
    const titles = (kind: string): (string | null)[] => [
      ...root.querySelectorAll(`table[data-advice="${kind}"] tr.advice-row .term-iri`),
    ].map((cell) => cell.getAttribute("title"));
    expect(titles("rec")).toContain(NS + "DailyMeetings");
    expect(titles("dis")).toContain(NS + "DailyMeetings");
    expect(root.querySelector('table[data-advice="rec"] .flag')).not.toBeNull();
    expect(root.querySelector('table[data-advice="dis"] .flag')).not.toBeNull();
  });

  it("matches the command line answer for the same profile", async () => {
    const { root, app } = await bootApp();
    clickAction(root, '[data-action="nav"][data-page="inputGoals"]');
    const box = [...root.querySelectorAll<HTMLInputElement>("input[data-action]")].find(
      (input) => input.getAttribute("data-iri") === NS + "Communication_Goal",
    );
    box?.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await app.calculate();
    await settle();

    const { stdout } = await run("agilekb", [
      "recommend",
      "--goal",
      "communication-goal",
      "--format",
      "json",
    ]);
    const cli = JSON.parse(stdout) as {
      recommended: { practice: string }[];
      discouraged: { practice: string }[];
    };

    const uiReport = app.state.report;
    expect(uiReport).not.toBeNull();
    expect(uiReport?.recommended.map((advice) => advice.practice)).toEqual(
      cli.recommended.map((advice) => advice.practice),
    );
    expect(uiReport?.discouraged.map((advice) => advice.practice)).toEqual(
      cli.discouraged.map((advice) => advice.practice),
    );
  });
});
