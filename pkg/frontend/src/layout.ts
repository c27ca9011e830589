/**
 * Pure timeline geometry.
 *
 * The service response is the only source of truth; this module just turns
 * a pathway document into positioned markers. Every x-position is
 * scale * (date - onset), and same-day events stack vertically in order.
 */

import { addDays, daysBetween, shortDate } from "./dates.js";
import type { EventDoc, PathwayDoc } from "./types.js";

export type MarkerKind = "anchor" | "community" | "clinical" | "ap";

export interface Marker {
  kind: MarkerKind;
  code: string;
  label: string;
  date: string;
  x: number;
  stack: number; // vertical slot among same-day events, 0 = baseline row
  eventId: string | null;
}

export interface Tick {
  x: number;
  label: string;
  major: boolean; // january ticks carry the year and render heavier
}

/** Events ordered the way the service orders them: by (date, order). */
export function sortEvents(events: readonly EventDoc[]): EventDoc[] {
  return [...events].sort((a, b) =>
    a.date < b.date ? -1 : a.date > b.date ? 1 : a.order - b.order,
  );
}

/**
 * The full display sequence: Onset, events by (date, order), Consent,
 * Admission. Mirrors the server's export ordering so a rendered row reads
 * identically to the exported code row.
 */
export function sequenceCodes(p: PathwayDoc): string[] {
  return [
    "Onset",
    ...sortEvents(p.events).map((e) => e.code),
    "Consent",
    "Admission",
  ];
}

export function totalDays(p: PathwayDoc): number {
  return Math.max(1, daysBetween(p.onset, p.admission));
}

export function xForDate(p: PathwayDoc, width: number, date: string): number {
  return (daysBetween(p.onset, date) / totalDays(p)) * width;
}

/** Inverse of xForDate, clamped into [onset, admission]. */
export function dateFromX(p: PathwayDoc, width: number, x: number): string {
  const ratio = Math.min(1, Math.max(0, x / width));
  return addDays(p.onset, Math.round(ratio * totalDays(p)));
}

function kindOf(event: EventDoc): MarkerKind {
  if (event.code === "AP") return "ap";
  return event.category === "clinical" ? "clinical" : "community";
}

function labelOf(event: EventDoc): string {
  const name = event.custom_label ? `${event.code}: ${event.custom_label}` : event.code;
  return `${name} ${shortDate(event.date)}`;
}

/** All markers, anchors included, ready to draw. */
export function markers(p: PathwayDoc, width: number): Marker[] {
  const out: Marker[] = [
    {
      kind: "anchor",
      code: "Onset",
      label: `Psychosis Onset ${shortDate(p.onset)}`,
      date: p.onset,
      x: 0,
      stack: 0,
      eventId: null,
    },
  ];
  const ordered = sortEvents(p.events);
  let previousDate = "";
  let stack = 0;
  for (const event of ordered) {
    stack = event.date === previousDate ? stack + 1 : 0;
    previousDate = event.date;
    out.push({
      kind: kindOf(event),
      code: event.code,
      label: labelOf(event),
      date: event.date,
      x: xForDate(p, width, event.date),
      stack,
      eventId: event.event_id,
    });
  }
  out.push({
    kind: "anchor",
    code: "Consent",
    label: `Consent ${shortDate(p.consent)}`,
    date: p.consent,
    x: xForDate(p, width, p.consent),
    stack: 0,
    eventId: null,
  });
  out.push({
    kind: "anchor",
    code: "Admission",
    label: `Admission ${shortDate(p.admission)}`,
    date: p.admission,
    x: width,
    stack: 0,
    eventId: null,
  });
  return out;
}

/**
 * Month tick marks between onset and admission, thinned so neighboring
 * labels stay at least minSpacing pixels apart on long spans.
 */
export function monthTicks(p: PathwayDoc, width: number, minSpacing = 40): Tick[] {
  const all: Tick[] = [];
  const names = ["Jan", "Feb", "Mar", "Apr", "May", "Jun",
                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];
  let [year, month] = p.onset.split("-").map(Number) as [number, number];
  // first month boundary at or after onset
  if (p.onset.slice(8) !== "01") {
    month += 1;
    if (month > 12) {
      month = 1;
      year += 1;
    }
  }
  for (;;) {
    const iso = `${String(year).padStart(4, "0")}-${String(month).padStart(2, "0")}-01`;
    if (iso > p.admission) break;
    const major = month === 1;
    all.push({
      x: xForDate(p, width, iso),
      label: major ? String(year) : names[month - 1] ?? "",
      major,
    });
    month += 1;
    if (month > 12) {
      month = 1;
      year += 1;
    }
  }
  if (all.length < 2) return all;
  const spacing = width / Math.max(1, all.length);
  const keepEvery = Math.max(1, Math.ceil(minSpacing / Math.max(1, spacing)));
  // majors always survive thinning so years stay readable
  return all.filter((tick, i) => tick.major || i % keepEvery === 0);
}
