/** Application wiring: one session, one view, linked panels.
 *
 * The loop: fetch the most informative view, let the user brush a
 * pattern, inspect it (parallel coordinates + crosstabs), tune the
 * spread threshold, and commit the selection as a background tile,
 * which refetches the view.  At most one mutation is in flight at a
 * time; every displayed number is taken verbatim from the service.
 */

import { ApiClient, ApiError, SessionSummary, ViewResponse } from "./api.js";
import { renderPcp } from "./pcp.js";
import { renderScatter } from "./scatter.js";
import {
  HypothesisForm,
  ViewModel,
  buildViewModel,
  validateHypothesisForm,
} from "./state.js";

/** Column groups of the focused-hypothesis preset, resolved by name. */
export const FOCUS_GROUP_NAMES: string[][] = [
  ["LEFT.2009", "CDU.2009", "SPD.2009", "FDP.2009", "GREEN.2009"],
  ["Elderly.pop.", "Old.Pop.", "Mid.aged.Pop.", "Young.Pop.", "Children.Pop."],
  [
    "Agricult..workf.",
    "Prod..workf.",
    "Manufac..Workf.",
    "Constr..workf.",
    "Service.workf.",
    "Trade.workf.",
    "Finance.workf.",
    "Pub..serv..workf.",
  ],
  ["Highschool.degree", "No.school.degree", "Unemploy.", "Unempl..Youth", "Income"],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export class App {
  session: SessionSummary | null = null;
  view: ViewResponse | null = null;
  model: ViewModel | null = null;
  private busy = false;

  private gainBadge: HTMLElement;
  private banner: HTMLElement;
  private status: HTMLElement;
  private scatterSvg: SVGSVGElement;
  private pcpSvg: SVGSVGElement;
  private crosstabPanel: HTMLElement;
  private selectionInfo: HTMLElement;
  private tauSlider: HTMLInputElement;
  private tauValue: HTMLElement;
  private commitButton: HTMLButtonElement;
  private presetSelect: HTMLSelectElement;
  private formError: HTMLElement;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private samples = 1,
  ) {
    root.innerHTML = "";
    const header = el("div", { class: "toolbar" });
    this.gainBadge = el("span", { id: "gain-badge", class: "badge" }, "gain -");
    this.banner = el("span", { id: "degenerate-banner", class: "banner hidden" },
      "degenerate view: the hypothesis sides do not differ");
    this.status = el("span", { id: "status" }, "");
    header.append(this.gainBadge, this.banner, this.status);

    const editor = el("div", { class: "hypothesis-editor" });
    this.presetSelect = el("select", { id: "hypothesis-preset" });
    this.presetSelect.append(
      new Option("generic exploration (all relations)", "unguided"),
      new Option("rural districts, four attribute groups", "focus"),
    );
    const applyButton = el("button", { id: "apply-hypothesis" }, "set hypothesis");
    applyButton.addEventListener("click", () => void this.applyPreset());
    this.formError = el("span", { id: "form-error", class: "error" }, "");
    editor.append(this.presetSelect, applyButton, this.formError);

    const plot = el("div", { class: "plot" });
    this.scatterSvg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.scatterSvg.id = "scatter";
    plot.appendChild(this.scatterSvg);

    const controls = el("div", { class: "controls" });
    this.selectionInfo = el("span", { id: "selection-info" }, "no selection");
    this.tauSlider = el("input", {
      id: "tau-slider",
      type: "range",
      min: "0.05",
      max: "1.2",
      step: "0.001",
      value: String(2 / 3),
    });
    this.tauValue = el("span", { id: "tau-value" }, (2 / 3).toFixed(3));
    this.tauSlider.addEventListener("input", () => void this.onTauChange());
    this.commitButton = el("button", { id: "commit-tile" }, "commit tile") as HTMLButtonElement;
    this.commitButton.disabled = true;
    this.commitButton.addEventListener("click", () => void this.commitTile());
    controls.append(this.selectionInfo, this.tauSlider, this.tauValue, this.commitButton);

    const inspector = el("div", { class: "inspector" });
    this.pcpSvg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.pcpSvg.id = "pcp";
    this.crosstabPanel = el("div", { id: "crosstab-panel" });
    inspector.append(this.pcpSvg, this.crosstabPanel);

    root.append(header, editor, plot, controls, inspector);
  }

  async init(builtin = "german", seed = 0): Promise<void> {
    this.session = await this.api.createSession({ builtin, seed });
    this.setStatus(`session ${this.session.id.slice(0, 8)}: ${this.session.n} x ${this.session.m}`);
  }

  get tau(): number {
    return Number(this.tauSlider.value);
  }

  get selection(): number[] {
    return this.model ? [...this.model.selection].sort((a, b) => a - b) : [];
  }

  private setStatus(text: string): void {
    this.status.textContent = text;
  }

  private requireSession(): SessionSummary {
    if (!this.session) throw new Error("no session");
    return this.session;
  }

  /** Build the hypothesis form for the selected preset. */
  async presetForm(name: string): Promise<HypothesisForm> {
    const session = this.requireSession();
    if (name === "unguided") {
      return { rows: "all", cols: "all", partition: "singletons" };
    }
    const factor = await this.api.getFactor(session.id, "Type");
    const rows = factor.values
      .map((value, row) => [value, row] as const)
      .filter(([value]) => value === "Rural")
      .map(([, row]) => row);
    const nameToIndex = new Map(session.col_names.map((n, j) => [n, j] as const));
    const partition = FOCUS_GROUP_NAMES.map((group) =>
      group.map((n) => {
        const j = nameToIndex.get(n);
        if (j === undefined) throw new Error(`column ${n} not in dataset`);
        return j;
      }),
    );
    const cols = partition.flat();
    return { rows, cols, partition };
  }

  async applyPreset(): Promise<void> {
    await this.applyHypothesis(await this.presetForm(this.presetSelect.value));
  }

  async applyHypothesis(form: HypothesisForm): Promise<void> {
    const session = this.requireSession();
    const problem = validateHypothesisForm(form, session.m);
    this.formError.textContent = problem ?? "";
    if (problem) return;
    await this.mutate(async () => {
      this.session = await this.api.setHypothesis(session.id, form);
      await this.refreshView();
    });
  }

  async refreshView(): Promise<void> {
    const session = this.requireSession();
    this.view = await this.api.getView(session.id, this.samples);
    this.model = buildViewModel(this.view, this.model ?? undefined);
    this.renderView();
  }

  private renderView(): void {
    if (!this.model || !this.view) return;
    this.gainBadge.textContent = `gain ${this.view.gain.toFixed(3)}`;
    this.banner.classList.toggle("hidden", !this.view.degenerate);
    renderScatter(this.scatterSvg, this.model, {
      onBrush: (rows) => void this.brushSelect(rows),
    });
  }

  /** Select data points (from the brush or programmatically) and refresh
   * the linked panels. */
  async brushSelect(rows: number[]): Promise<void> {
    if (!this.model) return;
    this.model.selection = new Set(rows);
    this.selectionInfo.textContent = rows.length ? `${rows.length} points` : "no selection";
    this.commitButton.disabled = rows.length < 2;
    this.renderView();
    await this.updateInspector();
  }

  private async updateInspector(): Promise<void> {
    const session = this.requireSession();
    const rows = this.selection;
    if (rows.length < 2) {
      this.pcpSvg.innerHTML = "";
      this.crosstabPanel.innerHTML = "";
      return;
    }
    const pcp = await this.api.getPcp(session.id, rows, this.tau);
    renderPcp(this.pcpSvg, pcp);
    const tables = await Promise.all(
      session.side_cols.map((col) => this.api.getCrosstab(session.id, col, rows)),
    );
    this.crosstabPanel.innerHTML = "";
    for (const table of tables) {
      const box = el("div", { class: "crosstab", "data-col": table.column });
      box.appendChild(el("h4", {}, table.column));
      for (const [category, count] of Object.entries(table.counts)) {
        const rowEl = el("div", { class: "crosstab-row", "data-category": category });
        rowEl.append(el("span", { class: "cat" }, category), el("span", { class: "count" }, String(count)));
        box.appendChild(rowEl);
      }
      this.crosstabPanel.appendChild(box);
    }
  }

  private async onTauChange(): Promise<void> {
    this.tauValue.textContent = this.tau.toFixed(3);
    if (this.model) this.model.tau = this.tau;
    if (this.selection.length >= 2) await this.updateInspector();
  }

  async commitTile(): Promise<void> {
    const session = this.requireSession();
    const rows = this.selection;
    if (rows.length < 2) return;
    await this.mutate(async () => {
      try {
        const result = await this.api.postTile(session.id, rows, this.tau);
        this.setStatus(
          `tile committed: ${result.tile.rows.length} rows x ${result.tile.cols.length} columns`,
        );
        this.formError.textContent = "";
      } catch (error) {
        if (error instanceof ApiError) {
          this.formError.textContent = error.message;
          return;
        }
        throw error;
      }
      this.session = await this.api.getSession(session.id);
      await this.brushSelect([]);
      await this.refreshView();
    });
  }

  /** Client-side single-writer: reject overlapping mutations. */
  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.busy) {
      this.formError.textContent = "another change is still in flight";
      return;
    }
    this.busy = true;
    try {
      await action();
    } finally {
      this.busy = false;
    }
  }
}
