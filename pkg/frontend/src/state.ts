/** View-model: what the widgets render, derived from service responses. */

import { AxisLabel, ViewResponse, decodeCoords } from "./api.js";

export type GlyphKind = "data" | "sample_h1" | "sample_h2";

export interface Point {
  row: number;
  kind: GlyphKind;
  x: number;
  y: number;
  focus: boolean;
}

export interface ViewModel {
  points: Point[];
  axisLabels: AxisLabel[][];
  gain: number;
  degenerate: boolean;
  selection: Set<number>;
  tau: number;
}

export function buildViewModel(view: ViewResponse, previous?: ViewModel): ViewModel {
  const focus = new Set(view.focus_rows);
  const points: Point[] = [];
  decodeCoords(view.coords_data).forEach(([x, y], row) => {
    points.push({ row, kind: "data", x, y, focus: focus.has(row) });
  });
  for (const block of view.samples_h1) {
    decodeCoords(block).forEach(([x, y], row) => {
      points.push({ row, kind: "sample_h1", x, y, focus: focus.has(row) });
    });
  }
  for (const block of view.samples_h2) {
    decodeCoords(block).forEach(([x, y], row) => {
      points.push({ row, kind: "sample_h2", x, y, focus: focus.has(row) });
    });
  }
  return {
    points,
    axisLabels: view.axis_labels,
    gain: view.gain,
    degenerate: view.degenerate,
    selection: previous ? new Set(previous.selection) : new Set(),
    tau: previous ? previous.tau : 2 / 3,
  };
}

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Data-point rows inside a brush rectangle (view coordinates). */
export function rowsInRect(model: ViewModel, rect: Rect): number[] {
  const xLo = Math.min(rect.x0, rect.x1);
  const xHi = Math.max(rect.x0, rect.x1);
  const yLo = Math.min(rect.y0, rect.y1);
  const yHi = Math.max(rect.y0, rect.y1);
  return model.points
    .filter(
      (p) => p.kind === "data" && p.x >= xLo && p.x <= xHi && p.y >= yLo && p.y <= yHi,
    )
    .map((p) => p.row);
}

export interface HypothesisForm {
  rows: number[] | "all";
  cols: number[] | "all";
  partition: number[][] | "singletons" | "whole";
}

/** Form-level validation mirroring the service's 422 conditions. */
export function validateHypothesisForm(form: HypothesisForm, m: number): string | null {
  if (Array.isArray(form.rows) && form.rows.length === 0) return "no rows selected";
  if (Array.isArray(form.cols) && form.cols.length === 0) return "no columns selected";
  if (Array.isArray(form.partition)) {
    const cols = form.cols === "all" ? Array.from({ length: m }, (_, j) => j) : form.cols;
    const seen = new Set<number>();
    for (const block of form.partition) {
      if (block.length === 0) return "empty partition group";
      for (const c of block) {
        if (seen.has(c)) return `column ${c} appears in two groups`;
        seen.add(c);
      }
    }
    const colSet = new Set(cols);
    if (seen.size !== colSet.size || [...seen].some((c) => !colSet.has(c)))
      return "groups must cover the selected columns exactly";
  }
  return null;
}

/** Axis caption: the five largest loadings, signs included. */
export function axisCaption(labels: AxisLabel[]): string {
  return labels
    .map((l) => `${l.name} ${l.value >= 0 ? "+" : "-"}${Math.abs(l.value).toFixed(2)}`)
    .join(", ");
}
