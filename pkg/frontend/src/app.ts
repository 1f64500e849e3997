// Application wiring: one UiSession per mounted app, forward-only phase
// wizard, rule inspector, what-if forking, report. All data flows in from
// the HTTP API; the browser refresh path restores state from the session id
// kept in the location hash.

import { ApiClient, ApiError, type KbSummary, type PhaseResponse } from "./api";
import { el } from "./format";
import { UiSession } from "./state";
import { renderAssessmentBars } from "./views/bars";
import { renderPhaseForm, renderPhaseTabs, type FormView } from "./views/form";
import { renderInspector } from "./views/inspector";
import { renderReport } from "./views/report";
import { renderComparison, renderWhatIfPanel } from "./views/whatif";

export interface AppOptions {
  base?: string;
  window?: Window & typeof globalThis;
}

export interface AppHandle {
  ready: Promise<void>;
  idle(): Promise<void>;
  readonly session: UiSession | null;
  api: ApiClient;
  root: HTMLElement;
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): AppHandle {
  const api = new ApiClient(options.base ?? "");
  const win = options.window ?? window;

  let kb: KbSummary | null = null;
  let session: UiSession | null = null;
  let formView: FormView | null = null;
  let inspectorDisease: string | null = null;

  // in-flight tracking: at most one submission runs, idle() awaits them all
  let pending = 0;
  const waiters: (() => void)[] = [];
  function track<T>(work: () => Promise<T>): Promise<T> {
    pending += 1;
    return work().finally(() => {
      pending -= 1;
      if (pending === 0) waiters.splice(0).forEach((w) => w());
    });
  }
  const idle = () =>
    pending === 0
      ? Promise.resolve()
      : new Promise<void>((resolve) => waiters.push(resolve));

  root.replaceChildren();
  root.classList.add("fuzzylattice-app");
  const banner = el("div", "banner hidden");
  banner.id = "banner";
  const bannerText = el("span", "banner-text");
  const retry = el("button", "secondary", "Retry");
  retry.id = "retry";
  banner.append(bannerText, retry);

  const header = el("header");
  header.append(el("h1", undefined, "Consultation"));
  const tabs = el("div", "phase-tabs");
  tabs.id = "phase-tabs";
  const legend = el("div", "disease-legend");
  legend.id = "disease-legend";
  header.append(tabs, legend);

  const formSlot = el("div", "slot");
  const resultsSlot = el("div", "slot");
  const inspectorSlot = el("div", "slot");
  const whatifControls = el("div", "slot whatif-controls");
  const whatifSlot = el("div", "slot");
  const comparisonSlot = el("div", "slot");
  const reportControls = el("div", "slot report-controls");
  const reportSlot = el("div", "slot");
  root.append(
    banner, header, formSlot, resultsSlot, inspectorSlot,
    whatifControls, whatifSlot, comparisonSlot, reportControls, reportSlot,
  );

  function hashSessionId(): string | null {
    const match = /#session=([0-9a-f-]+)/.exec(win.location.hash);
    return match ? match[1]! : null;
  }

  function renderLegend(summary: KbSummary): void {
    legend.replaceChildren(el("span", "legend-caption", "Chance scale:"));
    for (const term of summary.output.terms) {
      legend.append(
        el(
          "span",
          "legend-term",
          `${term.name} ${term.vertices[0]}–${term.vertices[2]}`,
        ),
      );
    }
  }

  function renderResults(assessments: PhaseResponse["assessments"], refined: PhaseResponse["refined"]): void {
    renderAssessmentBars(resultsSlot, kb!, assessments, refined);
    if (!inspectorDisease || !assessments.some((a) => a.disease === inspectorDisease)) {
      inspectorDisease = assessments[0]?.disease ?? null;
    }
    if (inspectorDisease) {
      renderInspector(inspectorSlot, assessments, inspectorDisease, (d) => {
        inspectorDisease = d;
        renderResults(assessments, refined);
      });
    }
  }

  function renderWizard(): void {
    renderPhaseTabs(tabs, kb!, session!);
    formView = renderPhaseForm(formSlot, kb!, session!, submitActivePhase);
    const last = session!.lastPhase();
    whatifControls.replaceChildren();
    reportControls.replaceChildren();
    if (last) {
      const whatifButton = el("button", "secondary", "What if?");
      whatifButton.id = "whatif-button";
      whatifButton.addEventListener("click", () => openWhatIf());
      whatifControls.append(whatifButton);
      const reportButton = el("button", "secondary", "Show report");
      reportButton.id = "show-report";
      reportButton.addEventListener("click", () => showReport());
      reportControls.append(reportButton);
    }
  }

  async function ensureSession(): Promise<string> {
    if (!session!.sessionId) {
      session!.sessionId = await api.createSession();
      win.location.hash = `session=${session!.sessionId}`;
    }
    return session!.sessionId;
  }

  function submitActivePhase(): void {
    const phase = session!.currentPhaseIndex();
    if (phase === null) return;
    const inputs = session!.collectInputs();
    if (Object.keys(inputs).length === 0) {
      formView?.setError(null, "Provide at least one value (or fewer skips).");
      return;
    }
    formView?.setBusy(true);
    void track(async () => {
      try {
        const sid = await ensureSession();
        const response = await api.submitPhase(sid, phase, inputs);
        session!.recordPhase(response, inputs);
        renderResults(response.assessments, response.refined);
        renderWizard();
      } catch (err) {
        if (err instanceof ApiError) {
          formView?.setError(err.field, err.message);
        } else {
          showBanner(`Connection lost: ${String(err)}`);
        }
        formView?.setBusy(false);
      }
    });
  }

  function openWhatIf(): void {
    const last = session!.lastPhase();
    if (!last) return;
    const panel = renderWhatIfPanel(whatifSlot, kb!, last, () => {
      const inputs = panel.collect();
      if (Object.keys(inputs).length === 0) {
        panel.setError("Provide at least one value for the fork.");
        return;
      }
      panel.setBusy(true);
      void track(async () => {
        try {
          const response = await api.submitPhase(session!.sessionId!, last.phase, inputs);
          renderComparison(comparisonSlot, kb!, last.assessments, response);
        } catch (err) {
          panel.setError(err instanceof ApiError ? err.message : String(err));
        } finally {
          panel.setBusy(false);
        }
      });
    });
  }

  function showReport(): void {
    void track(async () => {
      try {
        const report = await api.getReport(session!.sessionId!);
        renderReport(reportSlot, kb!, report);
      } catch (err) {
        showBanner(err instanceof ApiError ? err.message : String(err));
      }
    });
  }

  function showBanner(message: string): void {
    bannerText.textContent = message;
    banner.classList.remove("hidden");
  }

  async function restore(sid: string): Promise<void> {
    const info = await api.getSession(sid);
    session!.sessionId = info.id;
    if (info.phases.length === 0) return;
    const report = await api.getReport(sid);
    const applied = (info.audit as { outcome: string; phase: number; inputs: Record<string, number> }[])
      .filter((entry) => entry.outcome === "applied");
    for (const phase of report.phases) {
      const audit = applied.find((entry) => entry.phase === phase.phase);
      session!.completed.push({
        phase: phase.phase,
        inputs: audit ? audit.inputs : {},
        assessments: phase.assessments,
        refined: phase.refined,
      });
    }
    const last = session!.lastPhase();
    if (last) renderResults(last.assessments, last.refined);
  }

  async function boot(): Promise<void> {
    banner.classList.add("hidden");
    try {
      kb = await api.loadKb();
      session = new UiSession(kb);
      renderLegend(kb);
      const sid = hashSessionId();
      if (sid) await restore(sid);
      renderWizard();
    } catch (err) {
      showBanner(
        `Cannot reach the consultation service: ${
          err instanceof Error ? err.message : String(err)
        }`,
      );
    }
  }

  retry.addEventListener("click", () => void track(boot));
  const ready = track(boot);

  return {
    ready,
    idle,
    get session() {
      return session;
    },
    api,
    root,
  };
}
