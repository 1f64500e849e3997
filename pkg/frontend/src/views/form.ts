// Phase intake form: one slider per attribute of the active phase, with a
// numeric fallback for exact values and a "not assessed" checkbox that
// omits the attribute from the submission entirely.

import type { AttributeInfo, KbSummary } from "../api";
import { el } from "../format";
import type { UiSession } from "../state";

function termBands(attr: AttributeInfo): string {
  return attr.terms
    .map((t) => `${t.name} ${t.vertices[0]}–${t.vertices[2]}`)
    .join(" · ");
}

function attributeRow(session: UiSession, attr: AttributeInfo): HTMLElement {
  const slider = session.sliders.get(attr.name)!;
  const row = el("div", "attr-row");
  row.dataset.attr = attr.name;

  const head = el("div", "attr-head");
  head.append(
    el("span", "attr-name", attr.name),
    el("span", "attr-desc", attr.label),
  );
  const skipLabel = el("label", "skip-label");
  const skip = el("input", "skip");
  skip.type = "checkbox";
  skip.checked = slider.skipped;
  skipLabel.append(skip, document.createTextNode(" not assessed"));
  head.append(skipLabel);

  const [lo, hi] = attr.universe;
  const range = el("input", "value-range");
  range.type = "range";
  range.min = String(lo);
  range.max = String(hi);
  range.step = "0.01";
  range.value = String(slider.value);

  const number = el("input", "value-number");
  number.type = "number";
  number.min = String(lo);
  number.max = String(hi);
  number.step = "0.01";
  number.value = String(slider.value);

  const sync = (raw: string) => {
    const value = Number(raw);
    if (!Number.isFinite(value)) return;
    session.setValue(attr.name, value);
    range.value = raw;
    number.value = raw;
    row.classList.remove("error");
  };
  range.addEventListener("input", () => sync(range.value));
  number.addEventListener("input", () => sync(number.value));
  skip.addEventListener("change", () => {
    session.setSkipped(attr.name, skip.checked);
    range.disabled = number.disabled = skip.checked;
    row.classList.toggle("skipped", skip.checked);
  });

  const controls = el("div", "attr-controls");
  controls.append(range, number);
  row.append(head, controls, el("div", "term-bands", termBands(attr)));
  return row;
}

export interface FormView {
  root: HTMLElement;
  setError(attribute: string | null, message: string): void;
  setBusy(busy: boolean): void;
}

export function renderPhaseForm(
  container: HTMLElement,
  kb: KbSummary,
  session: UiSession,
  onSubmit: () => void,
): FormView {
  container.replaceChildren();
  const root = el("section", "phase-form");
  root.id = "phase-form";
  const message = el("div", "form-message");
  message.id = "form-message";

  const phaseIndex = session.currentPhaseIndex();
  if (phaseIndex === null) {
    root.append(el("p", "form-done", "All phases submitted. Open the report below."));
    container.append(root);
    return { root, setError: () => {}, setBusy: () => {} };
  }

  const phase = kb.phases.find((p) => p.index === phaseIndex)!;
  root.append(el("h2", "phase-title", `Phase ${phase.index}: ${phase.name}`));
  const rows = el("div", "attr-rows");
  for (const name of phase.attributes) {
    const attr = kb.attributes.find((a) => a.name === name)!;
    rows.append(attributeRow(session, attr));
  }
  const submit = el("button", "primary", "Assess phase");
  submit.id = "submit-phase";
  submit.addEventListener("click", onSubmit);
  root.append(rows, submit, message);
  container.append(root);

  return {
    root,
    setError(attribute, text) {
      message.textContent = text;
      message.classList.toggle("visible", text !== "");
      root
        .querySelectorAll(".attr-row.error")
        .forEach((n) => n.classList.remove("error"));
      if (attribute) {
        root
          .querySelector(`.attr-row[data-attr="${attribute}"]`)
          ?.classList.add("error");
      }
    },
    setBusy(busy) {
      submit.disabled = busy; // one in-flight submission per session
    },
  };
}

export function renderPhaseTabs(
  container: HTMLElement,
  kb: KbSummary,
  session: UiSession,
): void {
  container.replaceChildren();
  for (const phase of kb.phases) {
    const tab = el("span", "phase-tab", `${phase.index} ${phase.name}`);
    const done = session.completed.some((c) => c.phase === phase.index);
    const active = session.currentPhaseIndex() === phase.index;
    tab.classList.toggle("done", done);
    tab.classList.toggle("active", active);
    tab.classList.toggle("locked", !done && !active);
    container.append(tab);
  }
}
