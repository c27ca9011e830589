import { expect, test } from "vitest";

import {
  advanceScript,
  bannerForError,
  closeDialog,
  dialogViolations,
  initialState,
  openCreateDialog,
  openEditDialog,
  regressScript,
} from "../src/state.js";
import type { EventDoc } from "../src/types.js";

test("a fresh view starts at framing with nothing open", () => {
  const view = initialState();
  expect(view.stepId).toBe("framing");
  expect(view.dialog).toBeNull();
  expect(view.banner).toBeNull();
  expect(view.subjectId).toBeNull();
});

test("clicking the track opens a creation dialog at that date", () => {
  const view = openCreateDialog(initialState(), "2022-03-01", {
    category: "clinical",
    code: "ED",
  });
  expect(view.dialog).toMatchObject({
    mode: "create",
    eventId: null,
    category: "clinical",
    code: "ED",
    date: "2022-03-01",
    violations: [],
  });
});

test("opening a dialog clears any stale banner", () => {
  let view = initialState();
  view = { ...view, banner: { kind: "error", text: "old" } };
  view = openCreateDialog(view, "2022-03-01", null);
  expect(view.banner).toBeNull();
});

test("clicking a marker prefills the dialog from the event", () => {
  const event: EventDoc = {
    event_id: "e7",
    category: "community",
    code: "Other",
    custom_label: "neighbor",
    date: "2022-05-05",
    order: 2,
  };
  const view = openEditDialog(initialState(), event);
  expect(view.dialog).toMatchObject({
    mode: "edit",
    eventId: "e7",
    code: "Other",
    customLabel: "neighbor",
    date: "2022-05-05",
  });
  expect(closeDialog(view).dialog).toBeNull();
});

test("rejected saves keep the dialog open with the violations", () => {
  let view = openCreateDialog(initialState(), "2022-03-01", null);
  const violations = [
    { rule_code: "EVENT_OUT_OF_RANGE", message: "after admission", event_id: null },
  ];
  view = dialogViolations(view, violations);
  expect(view.dialog?.violations).toEqual(violations);
  // without a dialog the violations have nowhere to go and are dropped
  expect(dialogViolations(closeDialog(view), violations).dialog).toBeNull();
});

test("version conflicts get the reload banner", () => {
  const banner = bannerForError({ status: 409, errorCode: "VersionConflict" });
  expect(banner.kind).toBe("conflict");
  expect(banner.text).toMatch(/reloaded/i);
});

test("other failures map to plain error banners", () => {
  expect(
    bannerForError({ status: 409, errorCode: "SubjectExists", message: "taken" }),
  ).toEqual({ kind: "error", text: "taken" });
  expect(bannerForError({ status: 403 }).text).toMatch(/read-only/);
  expect(
    bannerForError({
      violations: [
        { rule_code: "ANCHOR_ORDER", message: "a", event_id: null },
        { rule_code: "DUPLICATE_AP", message: "b", event_id: null },
      ],
    }).text,
  ).toBe("a; b");
  expect(bannerForError({}).text).toBe("Request failed.");
});

test("script navigation clamps at both ends", () => {
  let view = initialState();
  view = regressScript(view);
  expect(view.stepId).toBe("framing");
  for (let i = 0; i < 40; i++) view = advanceScript(view);
  expect(view.stepId).toBe("review");
});
