/** Brushable SVG scatterplot with the two surrogate overlays.
 *
 * Glyphs follow the view conventions: data points are circles, samples
 * from the kept-together side are squares, samples from the split side
 * are triangles; points outside the hypothesis focus render as plus
 * signs.  Brushed data points turn orange.
 */

import { Point, Rect, ViewModel, axisCaption, rowsInRect } from "./state.js";
import { extent, linearScale } from "./scales.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ScatterOptions {
  width?: number;
  height?: number;
  onBrush?: (rows: number[]) => void;
}

function glyph(point: Point, px: number, py: number, selected: boolean): SVGElement {
  const size = 3.5;
  let el: SVGElement;
  if (!point.focus) {
    el = document.createElementNS(SVG_NS, "path");
    el.setAttribute(
      "d",
      `M ${px - size} ${py} H ${px + size} M ${px} ${py - size} V ${py + size}`,
    );
  } else if (point.kind === "data") {
    el = document.createElementNS(SVG_NS, "circle");
    el.setAttribute("cx", String(px));
    el.setAttribute("cy", String(py));
    el.setAttribute("r", String(size));
  } else if (point.kind === "sample_h1") {
    el = document.createElementNS(SVG_NS, "rect");
    el.setAttribute("x", String(px - size));
    el.setAttribute("y", String(py - size));
    el.setAttribute("width", String(2 * size));
    el.setAttribute("height", String(2 * size));
  } else {
    el = document.createElementNS(SVG_NS, "path");
    el.setAttribute(
      "d",
      `M ${px} ${py - size} L ${px + size} ${py + size} L ${px - size} ${py + size} Z`,
    );
  }
  el.classList.add("glyph", point.kind);
  if (!point.focus) el.classList.add("outside-focus");
  if (selected && point.kind === "data") el.classList.add("selected");
  el.dataset.row = String(point.row);
  return el;
}

export function renderScatter(
  svg: SVGSVGElement,
  model: ViewModel,
  options: ScatterOptions = {},
): void {
  const width = options.width ?? 640;
  const height = options.height ?? 520;
  const margin = { top: 8, right: 8, bottom: 36, left: 44 };
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.innerHTML = "";

  const xs = model.points.map((p) => p.x);
  const ys = model.points.map((p) => p.y);
  const x = linearScale(extent(xs), [margin.left, width - margin.right]);
  const y = linearScale(extent(ys), [height - margin.bottom, margin.top]);

  const plot = document.createElementNS(SVG_NS, "g");
  svg.appendChild(plot);
  // draw samples under the data so the data stays legible
  const order: Point[] = [
    ...model.points.filter((p) => p.kind !== "data"),
    ...model.points.filter((p) => p.kind === "data"),
  ];
  for (const point of order) {
    plot.appendChild(glyph(point, x(point.x), y(point.y), model.selection.has(point.row)));
  }

  const xCaption = document.createElementNS(SVG_NS, "text");
  xCaption.classList.add("axis-label");
  xCaption.setAttribute("x", String(width / 2));
  xCaption.setAttribute("y", String(height - 8));
  xCaption.setAttribute("text-anchor", "middle");
  xCaption.textContent = axisCaption(model.axisLabels[0] ?? []);
  svg.appendChild(xCaption);

  const yCaption = document.createElementNS(SVG_NS, "text");
  yCaption.classList.add("axis-label");
  yCaption.setAttribute("transform", `translate(12 ${height / 2}) rotate(-90)`);
  yCaption.setAttribute("text-anchor", "middle");
  yCaption.textContent = axisCaption(model.axisLabels[1] ?? []);
  svg.appendChild(yCaption);

  if (options.onBrush) {
    attachBrush(svg, model, x.invert, y.invert, options.onBrush);
  }
}

function attachBrush(
  svg: SVGSVGElement,
  model: ViewModel,
  invertX: (px: number) => number,
  invertY: (px: number) => number,
  onBrush: (rows: number[]) => void,
): void {
  let start: [number, number] | null = null;
  let band: SVGRectElement | null = null;

  const toLocal = (event: PointerEvent): [number, number] => {
    const box = svg.getBoundingClientRect();
    const w = svg.viewBox.baseVal.width || box.width || 1;
    const h = svg.viewBox.baseVal.height || box.height || 1;
    return [
      ((event.clientX - box.left) / (box.width || w)) * w,
      ((event.clientY - box.top) / (box.height || h)) * h,
    ];
  };

  svg.addEventListener("pointerdown", (event) => {
    start = toLocal(event);
    band = document.createElementNS(SVG_NS, "rect");
    band.classList.add("brush-band");
    svg.appendChild(band);
  });
  svg.addEventListener("pointermove", (event) => {
    if (!start || !band) return;
    const [cx, cy] = toLocal(event);
    band.setAttribute("x", String(Math.min(start[0], cx)));
    band.setAttribute("y", String(Math.min(start[1], cy)));
    band.setAttribute("width", String(Math.abs(cx - start[0])));
    band.setAttribute("height", String(Math.abs(cy - start[1])));
  });
  svg.addEventListener("pointerup", (event) => {
    if (!start) return;
    const [cx, cy] = toLocal(event);
    const rect: Rect = {
      x0: invertX(start[0]),
      x1: invertX(cx),
      y0: invertY(start[1]),
      y1: invertY(cy),
    };
    band?.remove();
    band = null;
    start = null;
    onBrush(rowsInRect(model, rect));
  });
}
