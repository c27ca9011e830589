/**
 * Browser entry point. Wires the service client, the timeline geometry,
 * and the interview script into the page. Holds no authoritative state:
 * every mutation round-trips through the service and the page re-renders
 * from the returned document.
 */

import { ApiClient, ApiError } from "./api.js";
import { shortDate } from "./dates.js";
import { dateFromX, markers, monthTicks, sortEvents } from "./layout.js";
import { SCRIPT_STEPS, stepById } from "./script.js";
import {
  advanceScript,
  bannerForError,
  closeDialog,
  dialogViolations,
  initialState,
  openCreateDialog,
  openEditDialog,
  regressScript,
  setBanner,
  type ViewState,
} from "./state.js";
import type { CatalogDoc, EventDoc, PathwayResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PLOT_WIDTH = 860;
const PLOT_PAD = 40;
const PLOT_HEIGHT = 280;
const AXIS_Y = 210;
const STACK_STEP = 34;

const api = new ApiClient("");
let view: ViewState = initialState();
let current: PathwayResponse | null = null;
let catalog: CatalogDoc | null = null;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function svg<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

// -- data flow ---------------------------------------------------------

async function reload(subjectId: string): Promise<void> {
  current = await api.getPathway(subjectId);
  view = { ...view, subjectId };
}

async function refreshSubjects(): Promise<void> {
  const list = byId<HTMLSelectElement>("subject-select");
  const summaries = await api.listPathways();
  clear(list);
  const blank = document.createElement("option");
  blank.value = "";
  blank.textContent = "(new participant)";
  list.appendChild(blank);
  for (const s of summaries) {
    const option = document.createElement("option");
    option.value = s.subject_id;
    option.textContent = `${s.subject_id} (${s.event_count} events)`;
    list.appendChild(option);
  }
  if (view.subjectId) list.value = view.subjectId;
}

function run(task: () => Promise<void>): void {
  task()
    .catch(async (error) => {
      if (error instanceof ApiError && error.isConflict && view.subjectId) {
        // someone else won the write race: show theirs, drop ours
        await reload(view.subjectId);
        view = setBanner(closeDialog(view), bannerForError(error));
        return;
      }
      view = setBanner(view, bannerForError(error as ApiError));
    })
    .then(render);
}

// -- timeline ----------------------------------------------------------

function markerShape(kind: string, x: number, y: number): SVGElement {
  if (kind === "anchor") {
    return svg("rect", {
      x: x - 5, y: y - 5, width: 10, height: 10,
      transform: `rotate(45 ${x} ${y})`, class: "marker anchor",
    });
  }
  if (kind === "ap") {
    return svg("rect", {
      x: x - 7, y: y - 7, width: 14, height: 14, class: "marker ap",
    });
  }
  const cls = kind === "clinical" ? "marker clinical" : "marker community";
  return svg("circle", { cx: x, cy: y, r: 8, class: cls });
}

function renderTimeline(): void {
  const host = byId<HTMLElement>("timeline");
  clear(host);
  if (!current) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent =
      "Pick a participant or enter the baseline dates to start a timeline.";
    host.appendChild(hint);
    return;
  }
  const pathway = current.pathway;
  const canvas = svg("svg", {
    viewBox: `0 0 ${PLOT_WIDTH + 2 * PLOT_PAD} ${PLOT_HEIGHT}`,
    width: "100%",
    role: "img",
  });
  canvas.appendChild(
    svg("line", {
      x1: PLOT_PAD, y1: AXIS_Y, x2: PLOT_PAD + PLOT_WIDTH, y2: AXIS_Y,
      class: "axis",
    }),
  );
  for (const tick of monthTicks(pathway, PLOT_WIDTH)) {
    const x = PLOT_PAD + tick.x;
    canvas.appendChild(
      svg("line", {
        x1: x, y1: AXIS_Y, x2: x, y2: AXIS_Y + (tick.major ? 12 : 7),
        class: tick.major ? "tick major" : "tick",
      }),
    );
    const label = svg("text", {
      x, y: AXIS_Y + 26, class: tick.major ? "tick-label major" : "tick-label",
      "text-anchor": "middle",
    });
    label.textContent = tick.label;
    canvas.appendChild(label);
  }
  for (const marker of markers(pathway, PLOT_WIDTH)) {
    const x = PLOT_PAD + marker.x;
    const y =
      marker.kind === "anchor" ? AXIS_Y : AXIS_Y - 30 - marker.stack * STACK_STEP;
    if (marker.kind !== "anchor") {
      canvas.appendChild(
        svg("line", { x1: x, y1: y + 8, x2: x, y2: AXIS_Y, class: "drop" }),
      );
    }
    const shape = markerShape(marker.kind, x, y);
    const tooltip = svg("title");
    tooltip.textContent = marker.label;
    shape.appendChild(tooltip);
    if (marker.eventId) {
      shape.classList.add("clickable");
      const id = marker.eventId;
      shape.addEventListener("click", (e) => {
        e.stopPropagation();
        const event = pathway.events.find((ev) => ev.event_id === id);
        if (event) {
          view = openEditDialog(view, event);
          render();
        }
      });
    }
    canvas.appendChild(shape);
    const text = svg("text", {
      x,
      y: marker.kind === "anchor" ? AXIS_Y + 44 : y - 12,
      class: "marker-label",
      "text-anchor": "middle",
    });
    text.textContent =
      marker.kind === "anchor"
        ? `${marker.code} ${shortDate(marker.date)}`
        : marker.code;
    canvas.appendChild(text);
  }
  // clicking open track space proposes a new event at that date
  canvas.addEventListener("click", (e) => {
    if (!current) return;
    const rect = canvas.getBoundingClientRect();
    const scale = (PLOT_WIDTH + 2 * PLOT_PAD) / rect.width;
    const x = (e.clientX - rect.left) * scale - PLOT_PAD;
    const date = dateFromX(current.pathway, PLOT_WIDTH, x);
    const step = stepById(view.stepId);
    const suggestion =
      step.code && step.category !== "anchor" && step.category !== null
        ? { category: step.category, code: step.code }
        : null;
    view = openCreateDialog(view, date, suggestion);
    render();
  });
  host.appendChild(canvas);
}

// -- interview script --------------------------------------------------

function renderScript(): void {
  const step = stepById(view.stepId);
  byId("script-title").textContent =
    `Step ${SCRIPT_STEPS.indexOf(step) + 1} of ${SCRIPT_STEPS.length}: ${step.title}`;
  byId("script-prompt").textContent = step.prompt;
  const palette = byId("palette");
  for (const entry of Array.from(palette.querySelectorAll("[data-code]"))) {
    const active =
      entry.getAttribute("data-code") === step.code ||
      (step.code === null &&
        step.category !== null &&
        entry.getAttribute("data-category") === step.category);
    entry.classList.toggle("active", active);
  }
}

function renderPalette(): void {
  const palette = byId("palette");
  clear(palette);
  if (!catalog) return;
  for (const group of catalog.categories) {
    if (group.category === "anchor") continue;
    const heading = document.createElement("h3");
    heading.textContent = group.category;
    palette.appendChild(heading);
    for (const node of group.nodes) {
      const entry = document.createElement("button");
      entry.type = "button";
      entry.className = "palette-entry";
      entry.setAttribute("data-code", node.code);
      entry.setAttribute("data-category", group.category);
      entry.textContent = `${node.code}: ${node.display_name}`;
      entry.addEventListener("click", () => {
        if (!current) return;
        view = openCreateDialog(view, current.pathway.onset, {
          category: group.category,
          code: node.code,
        });
        render();
      });
      palette.appendChild(entry);
    }
  }
}

// -- review ------------------------------------------------------------

function renderReview(): void {
  const host = byId("review-list");
  clear(host);
  const exportLink = byId<HTMLAnchorElement>("export-link");
  if (!current) {
    exportLink.classList.add("hidden");
    return;
  }
  const pathway = current.pathway;
  const rows: { code: string; date: string; detail: string }[] = [
    { code: "Onset", date: pathway.onset, detail: "Psychosis Onset" },
  ];
  for (const event of sortEvents(pathway.events)) {
    rows.push({
      code: event.code,
      date: event.date,
      detail: event.custom_label ?? "",
    });
  }
  rows.push({ code: "Consent", date: pathway.consent, detail: "LHS Consent" });
  rows.push({ code: "Admission", date: pathway.admission, detail: "Admission" });
  for (const row of rows) {
    const item = document.createElement("li");
    item.textContent = row.detail
      ? `${row.code} ${shortDate(row.date)} (${row.detail})`
      : `${row.code} ${shortDate(row.date)}`;
    host.appendChild(item);
  }
  exportLink.classList.remove("hidden");
  exportLink.href = api.exportUrl(pathway.subject_id);
}

// -- dialog ------------------------------------------------------------

function renderDialog(): void {
  const overlay = byId("dialog-overlay");
  const dialog = view.dialog;
  if (!dialog) {
    overlay.classList.add("hidden");
    return;
  }
  overlay.classList.remove("hidden");
  byId("dialog-title").textContent =
    dialog.mode === "create" ? "Add interaction" : "Edit interaction";

  const categorySelect = byId<HTMLSelectElement>("dialog-category");
  const codeSelect = byId<HTMLSelectElement>("dialog-code");
  if (catalog && categorySelect.options.length === 0) {
    for (const group of catalog.categories) {
      if (group.category === "anchor") continue;
      const option = document.createElement("option");
      option.value = group.category;
      option.textContent = group.category;
      categorySelect.appendChild(option);
    }
  }
  categorySelect.value = dialog.category;
  clear(codeSelect);
  if (catalog) {
    const group = catalog.categories.find((g) => g.category === dialog.category);
    for (const node of group ? group.nodes : []) {
      const option = document.createElement("option");
      option.value = node.code;
      option.textContent = `${node.code}: ${node.display_name}`;
      codeSelect.appendChild(option);
    }
  }
  codeSelect.value = dialog.code;
  byId<HTMLInputElement>("dialog-date").value = dialog.date;
  byId<HTMLInputElement>("dialog-label").value = dialog.customLabel;
  byId("dialog-label-row").classList.toggle("hidden", dialog.code !== "Other");
  byId("dialog-delete").classList.toggle("hidden", dialog.mode !== "edit");

  const problems = byId("dialog-violations");
  clear(problems);
  for (const violation of dialog.violations) {
    const item = document.createElement("li");
    item.textContent = `${violation.rule_code}: ${violation.message}`;
    problems.appendChild(item);
  }
}

function dialogInput(): {
  category: string;
  code: string;
  date: string;
  label: string | null;
} {
  const code = byId<HTMLSelectElement>("dialog-code").value;
  const label = byId<HTMLInputElement>("dialog-label").value.trim();
  return {
    category: byId<HTMLSelectElement>("dialog-category").value,
    code,
    date: byId<HTMLInputElement>("dialog-date").value,
    label: code === "Other" && label ? label : null,
  };
}

function saveDialog(): void {
  const dialog = view.dialog;
  if (!dialog || !current || !view.subjectId) return;
  const subjectId = view.subjectId;
  const expected = current.pathway.version;
  const input = dialogInput();
  run(async () => {
    try {
      if (dialog.mode === "create") {
        current = await api.addEvent(subjectId, {
          category: input.category,
          code: input.code,
          date: input.date,
          custom_label: input.label,
          expected_version: expected,
        });
      } else if (dialog.eventId) {
        current = await api.updateEvent(subjectId, dialog.eventId, {
          category: input.category,
          code: input.code,
          date: input.date,
          custom_label: input.label,
          expected_version: expected,
        });
      }
      view = closeDialog(view);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        // rule violations stay inside the dialog for correction
        view = dialogViolations(view, error.violations);
        return;
      }
      throw error;
    }
  });
}

function deleteDialogEvent(): void {
  const dialog = view.dialog;
  if (!dialog || !dialog.eventId || !current || !view.subjectId) return;
  const subjectId = view.subjectId;
  const eventId = dialog.eventId;
  const expected = current.pathway.version;
  run(async () => {
    current = await api.removeEvent(subjectId, eventId, expected);
    view = closeDialog(view);
  });
}

// -- banner and top-level render ----------------------------------------

function renderBanner(): void {
  const host = byId("banner");
  if (!view.banner) {
    host.classList.add("hidden");
    host.textContent = "";
    return;
  }
  host.classList.remove("hidden");
  host.className = `banner ${view.banner.kind}`;
  host.textContent = view.banner.text;
}

function render(): void {
  renderBanner();
  renderTimeline();
  renderScript();
  renderReview();
  renderDialog();
  byId("workspace").classList.toggle("hidden", current === null);
}

// -- wiring --------------------------------------------------------------

function wireBaselineForm(): void {
  byId<HTMLFormElement>("baseline-form").addEventListener("submit", (e) => {
    e.preventDefault();
    const subjectId = byId<HTMLInputElement>("baseline-subject").value.trim();
    const onset = byId<HTMLInputElement>("baseline-onset").value;
    const consent = byId<HTMLInputElement>("baseline-consent").value;
    const admission = byId<HTMLInputElement>("baseline-admission").value;
    run(async () => {
      current = await api.createPathway({
        subject_id: subjectId,
        onset,
        consent,
        admission,
      });
      view = { ...view, subjectId, banner: null };
      await refreshSubjects();
    });
  });
}

function wireControls(): void {
  byId<HTMLSelectElement>("subject-select").addEventListener("change", (e) => {
    const subjectId = (e.target as HTMLSelectElement).value;
    if (!subjectId) {
      current = null;
      view = { ...view, subjectId: null };
      render();
      return;
    }
    run(async () => {
      await reload(subjectId);
      view = setBanner(view, null);
    });
  });
  byId("script-next").addEventListener("click", () => {
    view = advanceScript(view);
    render();
  });
  byId("script-back").addEventListener("click", () => {
    view = regressScript(view);
    render();
  });
  byId("dialog-save").addEventListener("click", saveDialog);
  byId("dialog-delete").addEventListener("click", deleteDialogEvent);
  byId("dialog-cancel").addEventListener("click", () => {
    view = closeDialog(view);
    render();
  });
  byId<HTMLSelectElement>("dialog-category").addEventListener("change", (e) => {
    if (!view.dialog) return;
    const category = (e.target as HTMLSelectElement).value;
    view = {
      ...view,
      dialog: { ...view.dialog, category, code: "", violations: [] },
    };
    // pick the first code of the newly chosen category
    const group = catalog?.categories.find((g) => g.category === category);
    const first = group?.nodes[0];
    if (first && view.dialog) {
      view = { ...view, dialog: { ...view.dialog, code: first.code } };
    }
    render();
  });
  byId<HTMLSelectElement>("dialog-code").addEventListener("change", (e) => {
    if (!view.dialog) return;
    view = {
      ...view,
      dialog: { ...view.dialog, code: (e.target as HTMLSelectElement).value },
    };
    render();
  });
}

export async function start(): Promise<void> {
  wireBaselineForm();
  wireControls();
  catalog = await api.catalog();
  renderPalette();
  await refreshSubjects();
  render();
}

start().catch((error) => {
  const host = document.getElementById("banner");
  if (host) {
    host.classList.remove("hidden");
    host.className = "banner error";
    host.textContent = `Failed to reach the service: ${String(error)}`;
  }
});
