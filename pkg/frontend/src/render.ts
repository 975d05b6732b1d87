/** SVG/DOM construction from the pure layout primitives. */

import {
  assortmentCsv,
  compositionSegments,
  frontLayout,
  histogramBars,
} from "./geometry.js";
import type { ViewModel } from "./controller.js";
import type { HistogramBin, ProductInfo, Solution } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const FABRIC_COLORS = [
  "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
  "#b279a2", "#eeca3b", "#9d755d",
];

function fabricColor(fabric: string): string {
  let hash = 0;
  for (const ch of fabric) hash = (hash * 31 + ch.charCodeAt(0)) >>> 0;
  return FABRIC_COLORS[hash % FABRIC_COLORS.length]!;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

export function renderFront(
  container: HTMLElement,
  vm: ViewModel,
  onPick: (index: number) => void,
): void {
  container.replaceChildren();
  const solutions = vm.front?.solutions ?? [];
  if (!solutions.length) {
    const note = document.createElement("p");
    note.className = "placeholder";
    note.textContent = "No front yet - pick a store.";
    container.append(note);
    return;
  }
  const width = 560;
  const height = 360;
  const layout = frontLayout(solutions, width, height);
  const svg = svgElement("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "front-chart",
    role: "img",
  });

  if (layout.frontierPath.length > 1) {
    svg.append(
      svgElement("polyline", {
        points: layout.frontierPath.map((p) => `${p.px},${p.py}`).join(" "),
        class: "frontier",
      }),
    );
  }
  for (const point of layout.points) {
    const circle = svgElement("circle", {
      cx: String(point.px),
      cy: String(point.py),
      r: point.index === vm.highlighted ? "8" : "5",
      class: [
        "front-point",
        point.nonDominated ? "non-dominated" : "dominated",
        point.index === vm.highlighted ? "highlighted" : "",
      ].join(" "),
    });
    circle.addEventListener("click", () => onPick(point.index));
    const title = document.createElementNS(SVG_NS, "title");
    const s = solutions[point.index]!;
    title.textContent =
      `lambda ${s.trade_off_lambda.toFixed(2)} | revenue ${s.revenue_score.toFixed(2)}` +
      ` | impact ${s.higg_score.toFixed(2)}`;
    circle.append(title);
    svg.append(circle);
  }
  const xLabel = svgElement("text", { x: String(width / 2), y: String(height - 4), class: "axis" });
  xLabel.textContent = "revenue per slot";
  const yLabel = svgElement("text", {
    x: "12", y: String(height / 2), class: "axis", transform: `rotate(-90 12 ${height / 2})`,
  });
  yLabel.textContent = "impact score (lower is better)";
  svg.append(xLabel, yLabel);
  container.append(svg);
}

export function renderAssortment(
  container: HTMLElement,
  vm: ViewModel,
  products: Map<string, ProductInfo>,
  onLock: (productId: string, mode: "in" | "out") => void,
): void {
  container.replaceChildren();
  const solution = vm.current ?? (vm.highlighted >= 0 ? vm.front?.solutions[vm.highlighted] : null);
  if (!solution) return;

  const summary = document.createElement("p");
  summary.className = "scores";
  summary.textContent =
    `revenue ${solution.revenue_score.toFixed(2)} | ` +
    `impact ${solution.higg_score.toFixed(2)} | lambda ${solution.trade_off_lambda.toFixed(2)}`;
  container.append(summary);

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  for (const label of ["product", "fabric blend", "impact", "locks"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.append(th);
  }
  const body = table.createTBody();
  for (const pid of solution.product_ids) {
    const row = body.insertRow();
    const info = products.get(pid);
    const name = row.insertCell();
    name.textContent = info ? `${pid} (${info.name})` : pid;
    if (vm.state.lockedIn.includes(pid)) {
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = "locked";
      name.append(" ", badge);
    }
    row.insertCell().textContent = info
      ? Object.entries(info.blend).map(([f, p]) => `${f} ${(p * 100).toFixed(0)}%`).join(", ")
      : "";
    row.insertCell().textContent = info ? info.higg_score.toFixed(2) : "";
    const locks = row.insertCell();
    for (const mode of ["in", "out"] as const) {
      const button = document.createElement("button");
      button.textContent = mode === "in" ? "lock in" : "lock out";
      button.addEventListener("click", () => onLock(pid, mode));
      locks.append(button);
    }
  }
  container.append(table);

  const download = document.createElement("button");
  download.textContent = "export product ids";
  download.addEventListener("click", () => downloadCsv(solution));
  container.append(download);
}

function downloadCsv(solution: Solution): void {
  const blob = new Blob([assortmentCsv(solution)], { type: "text/csv" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `assortment_${solution.store}_k${solution.k}.csv`;
  link.click();
  URL.revokeObjectURL(link.href);
}

export function renderComposition(container: HTMLElement, vm: ViewModel): void {
  container.replaceChildren();
  const solution = vm.highlighted >= 0 ? vm.front?.solutions[vm.highlighted] : null;
  if (!solution) return;
  const width = 560;
  const segments = compositionSegments(solution.fabric_composition, width);
  const svg = svgElement("svg", { viewBox: `0 0 ${width} 70`, class: "composition" });
  for (const segment of segments) {
    svg.append(
      svgElement("rect", {
        x: String(segment.px), y: "6", width: String(segment.width), height: "28",
        fill: fabricColor(segment.fabric),
      }),
    );
  }
  let cursor = 0;
  for (const segment of segments) {
    if (segment.share >= 0.04) {
      const label = svgElement("text", {
        x: String(cursor + segment.width / 2), y: "56", class: "seg-label",
        "text-anchor": "middle",
      });
      label.textContent = `${segment.fabric} ${(segment.share * 100).toFixed(0)}%`;
      svg.append(label);
    }
    cursor += segment.width;
  }
  container.append(svg);
}

export function renderHistogram(
  container: HTMLElement,
  bins: HistogramBin[],
  caption: string,
): void {
  container.replaceChildren();
  const width = 270;
  const height = 120;
  const bars = histogramBars(bins, width, height);
  const svg = svgElement("svg", { viewBox: `0 0 ${width} ${height + 20}`, class: "histogram" });
  for (const bar of bars) {
    svg.append(
      svgElement("rect", {
        x: String(bar.px + 1),
        y: String(height - bar.height),
        width: String(Math.max(bar.width - 2, 1)),
        height: String(bar.height),
        class: "hist-bar",
      }),
    );
  }
  const label = svgElement("text", {
    x: String(width / 2), y: String(height + 14), class: "axis", "text-anchor": "middle",
  });
  label.textContent = caption;
  svg.append(label);
  container.append(svg);
}
