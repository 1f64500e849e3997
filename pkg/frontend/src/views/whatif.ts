// What-if exploration: resubmit the last phase with adjusted inputs. The
// server forks a derived session, so the original consultation's record
// stays untouched; this view renders the two outcomes side by side.

import type { AssessmentPayload, KbSummary, PhaseResponse } from "../api";
import { el } from "../format";
import { labelDeltas, type CompletedPhase } from "../state";
import { barRow, sortForDisplay } from "./bars";

export interface WhatIfInputsView {
  root: HTMLElement;
  collect(): Record<string, number>;
  setBusy(busy: boolean): void;
  setError(message: string): void;
}

export function renderWhatIfPanel(
  container: HTMLElement,
  kb: KbSummary,
  base: CompletedPhase,
  onSubmit: () => void,
): WhatIfInputsView {
  container.replaceChildren();
  const root = el("section", "whatif");
  root.id = "whatif-panel";
  root.append(
    el("h2", undefined, `What if? (phase ${base.phase} again, in a fork)`),
  );
  const values = new Map<string, { value: number; skipped: boolean }>();
  const phase = kb.phases.find((p) => p.index === base.phase)!;
  const rows = el("div", "attr-rows");
  for (const name of phase.attributes) {
    const attr = kb.attributes.find((a) => a.name === name)!;
    const provided = Object.prototype.hasOwnProperty.call(base.inputs, name);
    const initial = provided ? base.inputs[name]! : (attr.universe[0] + attr.universe[1]) / 2;
    values.set(name, { value: initial, skipped: !provided });

    const row = el("div", "attr-row");
    row.dataset.attr = name;
    const head = el("div", "attr-head");
    head.append(el("span", "attr-name", name));
    const skipLabel = el("label", "skip-label");
    const skip = el("input", "skip");
    skip.type = "checkbox";
    skip.checked = !provided;
    skipLabel.append(skip, document.createTextNode(" not assessed"));
    head.append(skipLabel);

    const range = el("input", "value-range");
    range.type = "range";
    range.min = String(attr.universe[0]);
    range.max = String(attr.universe[1]);
    range.step = "0.01";
    range.value = String(initial);
    range.disabled = !provided;
    const number = el("input", "value-number");
    number.type = "number";
    number.min = range.min;
    number.max = range.max;
    number.step = "0.01";
    number.value = String(initial);
    number.disabled = !provided;

    const sync = (raw: string) => {
      const v = Number(raw);
      if (!Number.isFinite(v)) return;
      values.get(name)!.value = v;
      range.value = raw;
      number.value = raw;
    };
    range.addEventListener("input", () => sync(range.value));
    number.addEventListener("input", () => sync(number.value));
    skip.addEventListener("change", () => {
      values.get(name)!.skipped = skip.checked;
      range.disabled = number.disabled = skip.checked;
    });

    const controls = el("div", "attr-controls");
    controls.append(range, number);
    row.append(head, controls);
    rows.append(row);
  }
  const submit = el("button", "primary", "Run fork");
  submit.id = "whatif-submit";
  submit.addEventListener("click", onSubmit);
  const message = el("div", "form-message");
  root.append(rows, submit, message);
  container.append(root);
  return {
    root,
    collect() {
      const inputs: Record<string, number> = {};
      for (const [name, entry] of values) {
        if (!entry.skipped) inputs[name] = entry.value;
      }
      return inputs;
    },
    setBusy(busy) {
      submit.disabled = busy;
    },
    setError(text) {
      message.textContent = text;
      message.classList.toggle("visible", text !== "");
    },
  };
}

export function renderComparison(
  container: HTMLElement,
  kb: KbSummary,
  before: AssessmentPayload[],
  forkResponse: PhaseResponse,
): void {
  container.replaceChildren();
  const section = el("section", "comparison");
  section.id = "comparison";
  section.append(el("h2", undefined, "Before / after"));
  const note = el("p", "fork-note");
  note.id = "fork-note";
  note.textContent =
    `Fork ${forkResponse.session} derived from ${forkResponse.forked_from}; ` +
    "the original consultation is unchanged.";
  section.append(note);

  const grid = el("div", "comparison-grid");
  const left = el("div", "comparison-column before");
  left.append(el("h3", undefined, "Before"));
  for (const a of sortForDisplay(before)) left.append(barRow(kb, a));
  const right = el("div", "comparison-column after");
  right.append(el("h3", undefined, "After"));
  for (const a of sortForDisplay(forkResponse.assessments)) right.append(barRow(kb, a));
  grid.append(left, right);
  section.append(grid);

  const deltas = el("div", "delta-badges");
  for (const delta of labelDeltas(before, forkResponse.assessments)) {
    if (!delta.changed) continue;
    const badge = el(
      "span",
      "delta-badge",
      `${delta.disease}: ${delta.before} → ${delta.after}`,
    );
    badge.dataset.disease = delta.disease;
    deltas.append(badge);
  }
  section.append(deltas);
  container.append(section);
}
