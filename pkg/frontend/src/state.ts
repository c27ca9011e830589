/**
 * View state reducers. The pathway document itself is never stored here;
 * the server copy is authoritative and the app re-fetches after every
 * mutation. This module only tracks what the UI is showing.
 */

import { nextStep, prevStep, SCRIPT_STEPS } from "./script.js";
import type { EventDoc, Violation } from "./types.js";

export interface DialogState {
  mode: "create" | "edit";
  eventId: string | null;
  category: string;
  code: string;
  date: string;
  customLabel: string;
  violations: Violation[];
}

export interface Banner {
  kind: "info" | "error" | "conflict";
  text: string;
}

export interface ViewState {
  subjectId: string | null;
  stepId: string;
  dialog: DialogState | null;
  banner: Banner | null;
}

export function initialState(): ViewState {
  return {
    subjectId: null,
    stepId: (SCRIPT_STEPS[0] as { id: string }).id,
    dialog: null,
    banner: null,
  };
}

/** Clicking empty timeline space opens a creation dialog at that date. */
export function openCreateDialog(
  state: ViewState,
  date: string,
  suggestion: { category: string; code: string } | null,
): ViewState {
  return {
    ...state,
    dialog: {
      mode: "create",
      eventId: null,
      category: suggestion?.category ?? "clinical",
      code: suggestion?.code ?? "ED",
      date,
      customLabel: "",
      violations: [],
    },
    banner: null,
  };
}

/** Clicking an existing marker opens the same dialog prefilled. */
export function openEditDialog(state: ViewState, event: EventDoc): ViewState {
  return {
    ...state,
    dialog: {
      mode: "edit",
      eventId: event.event_id,
      category: event.category,
      code: event.code,
      date: event.date,
      customLabel: event.custom_label ?? "",
      violations: [],
    },
    banner: null,
  };
}

export function closeDialog(state: ViewState): ViewState {
  return { ...state, dialog: null };
}

/** Rule violations from a rejected save render inside the open dialog. */
export function dialogViolations(
  state: ViewState,
  violations: Violation[],
): ViewState {
  if (!state.dialog) return state;
  return { ...state, dialog: { ...state.dialog, violations } };
}

export function setBanner(state: ViewState, banner: Banner | null): ViewState {
  return { ...state, banner };
}

export interface ErrorLike {
  status?: number;
  errorCode?: string | null;
  violations?: Violation[];
  message?: string;
}

/** Map a failed request to the banner the interviewer should see. */
export function bannerForError(error: ErrorLike): Banner {
  if (error.status === 409 && error.errorCode === "VersionConflict") {
    return {
      kind: "conflict",
      text: "This record changed elsewhere; reloaded the latest version.",
    };
  }
  if (error.status === 409) {
    return { kind: "error", text: error.message || "Already exists." };
  }
  if (error.status === 403) {
    return { kind: "error", text: "The store is read-only." };
  }
  if (error.violations && error.violations.length > 0) {
    return {
      kind: "error",
      text: error.violations.map((v) => v.message).join("; "),
    };
  }
  return { kind: "error", text: error.message || "Request failed." };
}

export function advanceScript(state: ViewState): ViewState {
  return { ...state, stepId: nextStep(state.stepId).id };
}

export function regressScript(state: ViewState): ViewState {
  return { ...state, stepId: prevStep(state.stepId).id };
}
