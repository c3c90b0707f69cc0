/** Parallel-coordinates inspector with spread-ratio annotations.
 *
 * All rows are drawn faintly; the current selection is highlighted.
 * Each axis is captioned "name (ratio)" with the selection/global spread
 * ratio from the service, and axes whose ratio passes the threshold are
 * marked as chosen.
 */

import { PcpResponse } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderPcp(svg: SVGSVGElement, payload: PcpResponse, width = 900, height = 320): void {
  const margin = { top: 14, right: 20, bottom: 80, left: 20 };
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.innerHTML = "";
  const [n, m] = payload.values.shape;
  const values = payload.values.values;
  const selected = new Set(payload.selection);

  const axisX = (j: number) =>
    margin.left + (j * (width - margin.left - margin.right)) / Math.max(1, m - 1);

  // per-column ranges for vertical placement
  const lows = new Array(m).fill(Infinity);
  const highs = new Array(m).fill(-Infinity);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < m; j++) {
      const v = values[i * m + j];
      if (v < lows[j]) lows[j] = v;
      if (v > highs[j]) highs[j] = v;
    }
  }
  const axisY = (j: number, v: number) => {
    const span = highs[j] - lows[j] || 1;
    return margin.top + (1 - (v - lows[j]) / span) * (height - margin.top - margin.bottom);
  };

  const lines = document.createElementNS(SVG_NS, "g");
  svg.appendChild(lines);
  const drawRow = (i: number, highlighted: boolean) => {
    const path = document.createElementNS(SVG_NS, "path");
    let d = "";
    for (let j = 0; j < m; j++) {
      d += `${j === 0 ? "M" : "L"} ${axisX(j)} ${axisY(j, values[i * m + j])} `;
    }
    path.setAttribute("d", d.trim());
    path.classList.add("pcp-line");
    if (highlighted) path.classList.add("selected");
    lines.appendChild(path);
  };
  for (let i = 0; i < n; i++) if (!selected.has(i)) drawRow(i, false);
  for (const i of payload.selection) drawRow(i, true);

  payload.report.columns.forEach((col, j) => {
    const axis = document.createElementNS(SVG_NS, "line");
    axis.classList.add("pcp-axis");
    axis.setAttribute("x1", String(axisX(j)));
    axis.setAttribute("x2", String(axisX(j)));
    axis.setAttribute("y1", String(margin.top));
    axis.setAttribute("y2", String(height - margin.bottom));
    svg.appendChild(axis);

    const label = document.createElementNS(SVG_NS, "text");
    label.classList.add("pcp-label");
    if (col.chosen) label.classList.add("chosen");
    const ratio = col.ratio === null ? "inf" : col.ratio.toFixed(2);
    label.textContent = `${col.name} (${ratio})`;
    label.setAttribute(
      "transform",
      `translate(${axisX(j)} ${height - margin.bottom + 8}) rotate(60)`,
    );
    svg.appendChild(label);
  });
}
