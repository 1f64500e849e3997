// Tiny display helpers. Values render exactly as the API reported them;
// only the decimal places are trimmed for the screen.

export function crispText(crisp: number): string {
  return crisp.toFixed(1);
}

export function barPercent(crisp: number, universe: [number, number]): number {
  const [lo, hi] = universe;
  return Math.max(0, Math.min(100, ((crisp - lo) / (hi - lo)) * 100));
}

const LABEL_CLASSES: Record<string, string> = {
  No: "label-no",
  Low: "label-low",
  Moderate: "label-moderate",
  High: "label-high",
};

export function labelClass(label: string): string {
  return LABEL_CLASSES[label] ?? "label-other";
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
