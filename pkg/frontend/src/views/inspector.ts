// Rule inspector: the activations behind one disease's assessment, straight
// from the phase response (antecedent chips, strength meter, clause degrees).

import type { AssessmentPayload } from "../api";
import { el } from "../format";

function activationRow(activation: AssessmentPayload["activations"][number]): HTMLElement {
  const row = el("div", "activation-row");
  const chips = el("div", "antecedent-chips");
  for (const [attr, term] of activation.antecedent) {
    chips.append(el("span", "chip", `${attr}=${term}`));
  }
  const meter = el("div", "strength-meter");
  const fill = el("div", "strength-fill");
  fill.style.width = `${activation.strength * 100}%`;
  meter.append(fill);
  const clauses = activation.clauses
    .map(([attr, degree]) => `${attr}:${degree.toFixed(3)}`)
    .join(", ");
  row.append(
    chips,
    el("span", "activation-consequent", `→ ${activation.disease}=${activation.term}`),
    meter,
    el("span", "activation-strength", activation.strength.toFixed(3)),
    el("span", "activation-reliability", `r=${activation.reliability.toFixed(2)}`),
    el("span", "activation-clauses", clauses),
  );
  return row;
}

export function renderInspector(
  container: HTMLElement,
  assessments: AssessmentPayload[],
  selected: string,
  onSelect: (disease: string) => void,
): void {
  container.replaceChildren();
  const section = el("section", "inspector");
  section.id = "rule-inspector";
  section.append(el("h2", undefined, "Rule activations"));
  const tabs = el("div", "inspector-tabs");
  for (const a of assessments) {
    const tab = el("button", "inspector-tab", a.disease);
    tab.classList.toggle("active", a.disease === selected);
    tab.addEventListener("click", () => onSelect(a.disease));
    tabs.append(tab);
  }
  section.append(tabs);
  const assessment = assessments.find((a) => a.disease === selected);
  const list = el("div", "activation-list");
  if (!assessment || assessment.activations.length === 0) {
    list.append(el("p", "no-activations", "No rule fired for this disease."));
  } else {
    for (const activation of assessment.activations) {
      list.append(activationRow(activation));
    }
  }
  section.append(list);
  container.append(section);
}
