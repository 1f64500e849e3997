// Assessment bars: one row per disease, width proportional to the crisp
// chance on the output universe, colored by label. No-evidence diseases get
// a hatched full-width track instead of a zero-height sliver.

import type { AssessmentPayload, KbSummary, ProbablePayload } from "../api";
import { barPercent, crispText, el, labelClass } from "../format";

export function sortForDisplay(
  assessments: AssessmentPayload[],
): AssessmentPayload[] {
  return [...assessments].sort((a, b) => {
    if (a.no_evidence !== b.no_evidence) return a.no_evidence ? 1 : -1;
    if (a.crisp !== b.crisp) return b.crisp - a.crisp;
    return a.disease.localeCompare(b.disease);
  });
}

export function barRow(
  kb: KbSummary,
  assessment: AssessmentPayload,
): HTMLElement {
  const row = el("div", "bar-row");
  row.dataset.disease = assessment.disease;
  row.append(el("span", "bar-disease", assessment.disease));
  const track = el("div", "bar-track");
  if (assessment.no_evidence) {
    track.append(el("div", "bar-fill no-evidence"));
    row.append(track, el("span", "bar-value", "—"));
    row.append(el("span", "label-badge no-evidence", "No evidence"));
  } else {
    const fill = el("div", `bar-fill ${labelClass(assessment.label)}`);
    fill.style.width = `${barPercent(assessment.crisp, kb.output.universe)}%`;
    track.append(fill);
    row.append(track, el("span", "bar-value", crispText(assessment.crisp)));
    row.append(
      el("span", `label-badge ${labelClass(assessment.label)}`, assessment.label),
    );
  }
  return row;
}

export function renderAssessmentBars(
  container: HTMLElement,
  kb: KbSummary,
  assessments: AssessmentPayload[],
  refined: ProbablePayload[],
): void {
  container.replaceChildren();
  const section = el("section", "assessments");
  section.id = "assessment-bars";
  section.append(el("h2", undefined, "Disease chances"));
  for (const assessment of sortForDisplay(assessments)) {
    section.append(barRow(kb, assessment));
  }
  const probable = el("div", "refined");
  probable.id = "refined-list";
  probable.append(el("span", "refined-caption", "Probable:"));
  if (refined.length === 0) {
    probable.append(el("span", "refined-empty", "none"));
  }
  for (const p of refined) {
    probable.append(
      el("span", `chip ${labelClass(p.label)}`, `${p.disease} ${crispText(p.crisp)}`),
    );
  }
  section.append(probable);
  container.append(section);
}
