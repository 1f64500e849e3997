// Pure view-model tests: no DOM, no server.

import { describe, expect, it } from "vitest";

import type { AssessmentPayload, KbSummary, PhaseResponse } from "../src/api";
import { barPercent, crispText, labelClass } from "../src/format";
import { UiSession, labelDeltas } from "../src/state";
import { sortForDisplay } from "../src/views/bars";

const KB: KbSummary = {
  format: 1,
  attributes: [
    {
      name: "a1",
      label: "first",
      universe: [0, 10],
      terms: [
        { name: "No", vertices: [0, 0, 4] },
        { name: "Moderate", vertices: [3, 5, 7] },
        { name: "Severe", vertices: [6, 10, 10] },
      ],
    },
    {
      name: "a2",
      label: "second",
      universe: [0, 10],
      terms: [{ name: "No", vertices: [0, 0, 10] }],
    },
  ],
  output: {
    name: "chance",
    universe: [0, 100],
    terms: [
      { name: "No", vertices: [0, 0, 10] },
      { name: "High", vertices: [60, 100, 100] },
    ],
  },
  diseases: [{ name: "d1", label: "d1" }],
  phases: [
    { index: 1, name: "history", attributes: ["a1"] },
    { index: 2, name: "exam", attributes: ["a2"] },
  ],
  stats: { nodes: 4, rules: 3 },
};

function assessment(
  disease: string,
  crisp: number,
  label: string,
  noEvidence = false,
): AssessmentPayload {
  return {
    disease,
    crisp,
    label,
    no_evidence: noEvidence,
    evaluated: true,
    activations: [],
  };
}

function phaseResponse(phase: number): PhaseResponse {
  return {
    phase,
    mode: "subset-closure",
    provided: ["a1"],
    assessments: [assessment("d1", 80, "High")],
    refined: [{ disease: "d1", crisp: 80, label: "High" }],
    session: "s",
    forked_from: null,
  };
}

describe("UiSession", () => {
  it("walks phases in declaration order", () => {
    const session = new UiSession(KB);
    expect(session.currentPhaseIndex()).toBe(1);
    session.recordPhase(phaseResponse(1), { a1: 5 });
    expect(session.currentPhaseIndex()).toBe(2);
    session.recordPhase(phaseResponse(2), { a2: 5 });
    expect(session.currentPhaseIndex()).toBeNull();
    expect(session.isComplete()).toBe(true);
  });

  it("rejects out-of-order phase results", () => {
    const session = new UiSession(KB);
    expect(() => session.recordPhase(phaseResponse(2), {})).toThrow(/out of order/);
  });

  it("omits skipped attributes from the request body", () => {
    const session = new UiSession(KB);
    session.setValue("a1", 4.8);
    session.setSkipped("a1", true);
    expect(session.collectInputs()).toEqual({});
    session.setSkipped("a1", false);
    expect(session.collectInputs()).toEqual({ a1: 4.8 });
  });

  it("initializes sliders at the universe midpoint", () => {
    const session = new UiSession(KB);
    expect(session.sliders.get("a1")?.value).toBe(5);
  });
});

describe("labelDeltas", () => {
  it("flags label changes including no-evidence transitions", () => {
    const before = [
      assessment("d1", 86, "High"),
      assessment("d4", 0, "No", true),
    ];
    const after = [
      assessment("d1", 0, "No", true),
      assessment("d4", 84, "High"),
    ];
    const deltas = labelDeltas(before, after);
    expect(deltas).toEqual([
      { disease: "d1", before: "High", after: "No evidence", changed: true },
      { disease: "d4", before: "No evidence", after: "High", changed: true },
    ]);
  });

  it("leaves unchanged labels unflagged", () => {
    const deltas = labelDeltas(
      [assessment("d1", 86.7, "High")],
      [assessment("d1", 86.5, "High")],
    );
    expect(deltas[0]?.changed).toBe(false);
  });
});

describe("display helpers", () => {
  it("sorts evidence by crisp descending, no-evidence last", () => {
    const rows = sortForDisplay([
      assessment("d3", 45, "Moderate"),
      assessment("d2", 0, "No", true),
      assessment("d1", 86, "High"),
    ]);
    expect(rows.map((r) => r.disease)).toEqual(["d1", "d3", "d2"]);
  });

  it("formats crisp values to one decimal", () => {
    expect(crispText(86.66666666666667)).toBe("86.7");
  });

  it("scales bars against the output universe", () => {
    expect(barPercent(50, [0, 100])).toBe(50);
    expect(barPercent(-5, [0, 100])).toBe(0);
  });

  it("maps labels to stable css classes", () => {
    expect(labelClass("High")).toBe("label-high");
    expect(labelClass("Weird")).toBe("label-other");
  });
});
