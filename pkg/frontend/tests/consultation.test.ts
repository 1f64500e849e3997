// Scripted consultation flow against the real service (started by
// server.global.ts), driven through the DOM in jsdom.

import { beforeEach, describe, expect, it } from "vitest";

import { mountApp, type AppHandle } from "../src/app";

const BASE = "http://127.0.0.1:8436";

const REFERENCE_INPUTS: Record<string, number> = {
  a1: 4.8,
  a2: 3.98,
  a3: 2.1,
  a4: 5,
  a5: 1.94,
};

const EXPECTED_LABELS: Record<string, string> = {
  d1: "High",
  d2: "High",
  d3: "Moderate",
  d4: "High",
  d5: "Low",
};

function freshRoot(): HTMLElement {
  window.location.hash = "";
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app")!;
}

async function mounted(): Promise<AppHandle> {
  const app = mountApp(freshRoot(), { base: BASE });
  await app.ready;
  await app.idle();
  return app;
}

function setNumber(scope: HTMLElement, attr: string, value: number): void {
  const input = scope.querySelector<HTMLInputElement>(
    `.attr-row[data-attr="${attr}"] input.value-number`,
  );
  expect(input, `number input for ${attr}`).toBeTruthy();
  input!.value = String(value);
  input!.dispatchEvent(new Event("input", { bubbles: true }));
}

function setSkipped(scope: HTMLElement, attr: string, skipped: boolean): void {
  const box = scope.querySelector<HTMLInputElement>(
    `.attr-row[data-attr="${attr}"] input.skip`,
  );
  expect(box, `skip checkbox for ${attr}`).toBeTruthy();
  if (box!.checked !== skipped) box!.click();
}

async function submitReferenceConsultation(app: AppHandle): Promise<void> {
  for (const [attr, value] of Object.entries(REFERENCE_INPUTS)) {
    setNumber(app.root, attr, value);
  }
  app.root.querySelector<HTMLButtonElement>("#submit-phase")!.click();
  await app.idle();
}

function displayedBars(app: AppHandle): { disease: string; label: string; value: string }[] {
  return [...app.root.querySelectorAll("#assessment-bars .bar-row")].map((row) => ({
    disease: row.getAttribute("data-disease")!,
    label: row.querySelector(".label-badge")!.textContent!,
    value: row.querySelector(".bar-value")!.textContent!,
  }));
}

describe("knowledge-base loading", () => {
  it("renders one slider per attribute with the variable's exact bounds", async () => {
    const app = await mounted();
    const rows = app.root.querySelectorAll("#phase-form .attr-row");
    expect(rows.length).toBe(5);
    for (const row of rows) {
      const range = row.querySelector<HTMLInputElement>("input.value-range")!;
      expect(range.min).toBe("0");
      expect(range.max).toBe("10");
      expect(range.step).toBe("0.01");
    }
  });

  it("shows the four output terms in the legend", async () => {
    const app = await mounted();
    const terms = [...app.root.querySelectorAll("#disease-legend .legend-term")];
    expect(terms.map((t) => t.textContent![0] ? t.textContent!.split(" ")[0] : "")).toEqual([
      "No",
      "Low",
      "Moderate",
      "High",
    ]);
  });

  it("shows a blocking retry banner when the service is unreachable", async () => {
    const app = mountApp(freshRoot(), { base: "http://127.0.0.1:59321" });
    await app.ready;
    const banner = app.root.querySelector("#banner")!;
    expect(banner.classList.contains("hidden")).toBe(false);
    expect(app.root.querySelector("#retry")).toBeTruthy();
  });
});

describe("reference consultation", () => {
  it("completes the wizard and displays the five expected labels", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);

    const bars = displayedBars(app);
    expect(bars.length).toBe(5);
    const byDisease = Object.fromEntries(bars.map((b) => [b.disease, b.label]));
    expect(byDisease).toEqual(EXPECTED_LABELS);
    // sorted by crisp descending
    expect(bars.map((b) => b.disease)).toEqual(["d1", "d2", "d4", "d3", "d5"]);
  });

  it("displays exactly the numbers the API reported", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);
    const report = await app.api.getReport(app.session!.sessionId!);
    const fromApi = new Map(
      report.phases[0]!.assessments.map((a) => [a.disease, a.crisp.toFixed(1)]),
    );
    for (const bar of displayedBars(app)) {
      expect(bar.value).toBe(fromApi.get(bar.disease));
    }
  });

  it("marks the phase done and blocks further forward input", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);
    expect(app.root.querySelector(".phase-tab")!.classList.contains("done")).toBe(true);
    expect(app.root.querySelector("#submit-phase")).toBeNull();
    expect(app.root.querySelector(".form-done")).toBeTruthy();
  });

  it("shows rule activations with clause degrees in the inspector", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);
    const first = app.root.querySelector("#rule-inspector .activation-row")!;
    expect(first.querySelector(".chip")!.textContent).toBe("a4=Moderate");
    expect(first.querySelector(".activation-strength")!.textContent).toBe("1.000");
    expect(first.querySelector(".activation-clauses")!.textContent).toContain("a4:1.000");
  });

  it("renders the report with a timeline entry and the final ranking", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);
    app.root.querySelector<HTMLButtonElement>("#show-report")!.click();
    await app.idle();
    const entries = app.root.querySelectorAll("#report-view .timeline-entry");
    expect(entries.length).toBe(1);
    const report = await app.api.getReport(app.session!.sessionId!);
    const rows = [...app.root.querySelectorAll("#final-list .final-row")];
    expect(rows.map((r) => r.getAttribute("data-disease"))).toEqual(
      report.final.map((p) => p.disease),
    );
    expect(rows[0]!.querySelector(".final-crisp")!.textContent).toBe(
      report.final[0]!.crisp.toFixed(1),
    );
  });

  it("surfaces field-level validation errors inline", async () => {
    const app = await mounted();
    setNumber(app.root, "a1", 42);
    app.root.querySelector<HTMLButtonElement>("#submit-phase")!.click();
    await app.idle();
    const message = app.root.querySelector("#form-message")!;
    expect(message.textContent).toContain("a1");
    expect(
      app.root.querySelector('.attr-row[data-attr="a1"]')!.classList.contains("error"),
    ).toBe(true);
  });
});

describe("what-if forking", () => {
  async function partialConsultation(app: AppHandle): Promise<void> {
    for (const attr of ["a1", "a2", "a3", "a5"]) {
      setSkipped(app.root, attr, true);
    }
    setNumber(app.root, "a4", 5);
    app.root.querySelector<HTMLButtonElement>("#submit-phase")!.click();
    await app.idle();
  }

  it("forks a derived session and leaves the original report unchanged", async () => {
    const app = await mounted();
    await partialConsultation(app);
    const sid = app.session!.sessionId!;
    const before = await (await fetch(`${BASE}/api/sessions/${sid}/report`)).text();

    app.root.querySelector<HTMLButtonElement>("#whatif-button")!.click();
    const panel = app.root.querySelector<HTMLElement>("#whatif-panel")!;
    setNumber(panel, "a4", 9.5);
    panel.querySelector<HTMLButtonElement>("#whatif-submit")!.click();
    await app.idle();

    const note = app.root.querySelector("#fork-note")!.textContent!;
    expect(note).toContain(`derived from ${sid}`);
    const after = await (await fetch(`${BASE}/api/sessions/${sid}/report`)).text();
    expect(after).toBe(before);

    const info = await app.api.getSession(sid);
    expect(info.audit.length).toBe(2);
  });

  it("shows before/after bars and delta badges for flipped labels", async () => {
    const app = await mounted();
    await partialConsultation(app);
    app.root.querySelector<HTMLButtonElement>("#whatif-button")!.click();
    const panel = app.root.querySelector<HTMLElement>("#whatif-panel")!;
    setNumber(panel, "a4", 9.5);
    panel.querySelector<HTMLButtonElement>("#whatif-submit")!.click();
    await app.idle();

    const comparison = app.root.querySelector("#comparison")!;
    expect(comparison.querySelectorAll(".comparison-column.before .bar-row").length).toBe(5);
    expect(comparison.querySelectorAll(".comparison-column.after .bar-row").length).toBe(5);
    const badges = [...comparison.querySelectorAll(".delta-badge")];
    const byDisease = Object.fromEntries(
      badges.map((b) => [b.getAttribute("data-disease"), b.textContent]),
    );
    expect(byDisease["d1"]).toContain("High → No evidence");
    expect(byDisease["d4"]).toContain("No evidence → High");
  });
});

describe("session restore", () => {
  it("rebuilds the consultation from the session id in the hash", async () => {
    const app = await mounted();
    await submitReferenceConsultation(app);
    const sid = app.session!.sessionId!;
    expect(window.location.hash).toBe(`#session=${sid}`);

    // simulate a refresh: fresh DOM, same location hash
    document.body.innerHTML = '<div id="app"></div>';
    const revived = mountApp(document.getElementById("app")!, { base: BASE });
    await revived.ready;
    await revived.idle();

    expect(revived.session!.sessionId).toBe(sid);
    const bars = displayedBars(revived);
    expect(bars.length).toBe(5);
    expect(bars.map((b) => b.disease)).toEqual(["d1", "d2", "d4", "d3", "d5"]);
    // forward-only: the only declared phase is already done
    expect(revived.root.querySelector("#submit-phase")).toBeNull();
  });
});
