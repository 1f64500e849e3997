// Session view-model: slider values, phase progression, fork bookkeeping.
// Phase flow is forward-only; the sole path back is an explicit what-if
// fork, which lands in a new server-side session and never touches this one.

import type {
  AssessmentPayload,
  KbSummary,
  PhaseResponse,
  ProbablePayload,
} from "./api";

export interface SliderState {
  attribute: string;
  value: number;
  skipped: boolean; // "not assessed": the key is omitted from the request
}

export interface CompletedPhase {
  phase: number;
  inputs: Record<string, number>;
  assessments: AssessmentPayload[];
  refined: ProbablePayload[];
}

export class UiSession {
  sessionId: string | null = null;
  completed: CompletedPhase[] = [];
  sliders = new Map<string, SliderState>();

  constructor(readonly kb: KbSummary) {
    for (const attr of kb.attributes) {
      const [lo, hi] = attr.universe;
      this.sliders.set(attr.name, {
        attribute: attr.name,
        value: (lo + hi) / 2,
        skipped: false,
      });
    }
  }

  /** Index of the phase the wizard is currently collecting, or null when done. */
  currentPhaseIndex(): number | null {
    const next = this.kb.phases[this.completed.length];
    return next ? next.index : null;
  }

  isComplete(): boolean {
    return this.completed.length === this.kb.phases.length;
  }

  currentAttributes(): string[] {
    const phase = this.kb.phases[this.completed.length];
    return phase ? phase.attributes : [];
  }

  /** Request body for the active phase; skipped attributes are simply absent. */
  collectInputs(): Record<string, number> {
    const inputs: Record<string, number> = {};
    for (const name of this.currentAttributes()) {
      const slider = this.sliders.get(name);
      if (slider && !slider.skipped) inputs[name] = slider.value;
    }
    return inputs;
  }

  setValue(attribute: string, value: number): void {
    const slider = this.sliders.get(attribute);
    if (!slider) throw new Error(`unknown attribute ${attribute}`);
    slider.value = value;
  }

  setSkipped(attribute: string, skipped: boolean): void {
    const slider = this.sliders.get(attribute);
    if (!slider) throw new Error(`unknown attribute ${attribute}`);
    slider.skipped = skipped;
  }

  recordPhase(response: PhaseResponse, inputs: Record<string, number>): void {
    const expected = this.currentPhaseIndex();
    if (expected === null || response.phase !== expected) {
      throw new Error(
        `phase ${response.phase} out of order (expected ${expected ?? "none"})`,
      );
    }
    this.completed.push({
      phase: response.phase,
      inputs,
      assessments: response.assessments,
      refined: response.refined,
    });
  }

  lastPhase(): CompletedPhase | null {
    return this.completed[this.completed.length - 1] ?? null;
  }
}

export interface LabelDelta {
  disease: string;
  before: string;
  after: string;
  changed: boolean;
}

/** Side-by-side label comparison for the what-if view (no-evidence is a label of its own). */
export function labelDeltas(
  before: AssessmentPayload[],
  after: AssessmentPayload[],
): LabelDelta[] {
  const shown = (a: AssessmentPayload) => (a.no_evidence ? "No evidence" : a.label);
  const byDisease = new Map(after.map((a) => [a.disease, a]));
  return before.map((b) => {
    const a = byDisease.get(b.disease);
    const beforeLabel = shown(b);
    const afterLabel = a ? shown(a) : beforeLabel;
    return {
      disease: b.disease,
      before: beforeLabel,
      after: afterLabel,
      changed: beforeLabel !== afterLabel,
    };
  });
}
