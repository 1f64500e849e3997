// Final consultation report: per-phase timeline plus the refined list, all
// values verbatim from GET /report. Print-friendly via the print stylesheet.

import type { KbSummary, ReportPayload } from "../api";
import { crispText, el, labelClass } from "../format";

export function renderReport(
  container: HTMLElement,
  kb: KbSummary,
  report: ReportPayload,
): void {
  container.replaceChildren();
  const section = el("section", "report");
  section.id = "report-view";
  const head = el("div", "report-head");
  head.append(el("h2", undefined, "Consultation report"));
  const print = el("button", "secondary", "Print");
  print.id = "print-report";
  print.addEventListener("click", () => window.print());
  head.append(print);
  section.append(head);

  const timeline = el("div", "timeline");
  for (const phase of report.phases) {
    const spec = kb.phases.find((p) => p.index === phase.phase);
    const entry = el("div", "timeline-entry");
    entry.dataset.phase = String(phase.phase);
    entry.append(
      el("h3", undefined, `Phase ${phase.phase}${spec ? ` (${spec.name})` : ""}`),
      el("p", "timeline-provided", `Inputs: ${phase.provided.join(", ")}`),
    );
    const list = el("ul", "timeline-findings");
    for (const a of phase.assessments) {
      const item = el(
        "li",
        a.no_evidence ? "finding no-evidence" : "finding",
        a.no_evidence
          ? `${a.disease}: no evidence`
          : `${a.disease}: ${crispText(a.crisp)} (${a.label})`,
      );
      list.append(item);
    }
    entry.append(list);
    timeline.append(entry);
  }
  section.append(timeline);

  section.append(el("h3", undefined, `Final (threshold ${report.threshold})`));
  const final = el("div", "final-list");
  final.id = "final-list";
  if (report.final.length === 0) {
    final.append(el("p", "refined-empty", "No probable diseases."));
  }
  for (const p of report.final) {
    const row = el("div", "final-row");
    row.dataset.disease = p.disease;
    row.append(
      el("span", "final-disease", p.disease),
      el("span", "final-crisp", crispText(p.crisp)),
      el("span", `label-badge ${labelClass(p.label)}`, p.label),
    );
    final.append(row);
  }
  section.append(final);
  container.append(section);
}
