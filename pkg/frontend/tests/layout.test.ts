import { expect, test } from "vitest";

import { daysBetween } from "../src/dates.js";
import {
  dateFromX,
  markers,
  monthTicks,
  sequenceCodes,
  sortEvents,
  totalDays,
  xForDate,
} from "../src/layout.js";
import { FIXTURE_SEQUENCE, fixturePathway } from "./fixture.js";

const WIDTH = 860;

test("sequenceCodes mirrors the export ordering", () => {
  expect(sequenceCodes(fixturePathway())).toEqual(FIXTURE_SEQUENCE);
});

test("sortEvents breaks date ties by order", () => {
  const sorted = sortEvents(fixturePathway().events);
  const juneCodes = sorted.filter((e) => e.date === "2022-06-20").map((e) => e.code);
  expect(juneCodes).toEqual(["Police", "ED"]);
  const septCodes = sorted.filter((e) => e.date === "2022-09-13").map((e) => e.code);
  expect(septCodes).toEqual(["Family", "Acute"]);
});

test("x positions are proportional to days since onset", () => {
  const p = fixturePathway();
  expect(totalDays(p)).toBe(459);
  expect(xForDate(p, WIDTH, p.onset)).toBe(0);
  expect(xForDate(p, WIDTH, p.admission)).toBe(WIDTH);
  const family = xForDate(p, WIDTH, "2022-04-14");
  expect(family).toBeCloseTo((103 / 459) * WIDTH, 6);
  // doubling the width doubles every x
  expect(xForDate(p, 2 * WIDTH, "2022-04-14")).toBeCloseTo(2 * family, 6);
});

test("markers cover anchors plus every event in sequence order", () => {
  const p = fixturePathway();
  const ms = markers(p, WIDTH);
  expect(ms.map((m) => m.code)).toEqual(FIXTURE_SEQUENCE);
  const first = ms[0]!;
  const last = ms[ms.length - 1]!;
  expect(first.kind).toBe("anchor");
  expect(first.x).toBe(0);
  expect(last.code).toBe("Admission");
  expect(last.x).toBe(WIDTH);
  for (const m of ms) {
    expect(m.x).toBeGreaterThanOrEqual(0);
    expect(m.x).toBeLessThanOrEqual(WIDTH);
  }
});

test("same-day events stack instead of overlapping", () => {
  const ms = markers(fixturePathway(), WIDTH);
  const june = ms.filter((m) => m.date === "2022-06-20");
  expect(june.map((m) => [m.code, m.stack])).toEqual([
    ["Police", 0],
    ["ED", 1],
  ]);
  const sept = ms.filter((m) => m.date === "2022-09-13" && m.eventId !== null);
  expect(sept.map((m) => [m.code, m.stack])).toEqual([
    ["Family", 0],
    ["Acute", 1],
  ]);
  // distinct dates reset the stack
  const outpt = ms.find((m) => m.code === "Outpt")!;
  expect(outpt.stack).toBe(0);
});

test("AP and categories map to marker kinds", () => {
  const ms = markers(fixturePathway(), WIDTH);
  expect(ms.find((m) => m.code === "AP")?.kind).toBe("ap");
  expect(ms.find((m) => m.code === "Police")?.kind).toBe("community");
  expect(ms.find((m) => m.code === "Inpt")?.kind).toBe("clinical");
});

test("dateFromX inverts xForDate within a day", () => {
  const p = fixturePathway();
  for (const date of ["2022-01-01", "2022-04-14", "2022-07-27", "2023-04-05"]) {
    const x = xForDate(p, WIDTH, date);
    expect(dateFromX(p, WIDTH, x)).toBe(date);
  }
});

test("dateFromX clamps to the anchor range", () => {
  const p = fixturePathway();
  expect(dateFromX(p, WIDTH, -50)).toBe(p.onset);
  expect(dateFromX(p, WIDTH, WIDTH + 50)).toBe(p.admission);
});

test("single-day pathways do not divide by zero", () => {
  const p = fixturePathway();
  p.events = [];
  p.onset = "2022-01-01";
  p.consent = "2022-01-01";
  p.admission = "2022-01-01";
  // degenerate span still renders: everything at x=0 except admission
  expect(totalDays(p)).toBe(1);
  expect(dateFromX(p, WIDTH, 0)).toBe("2022-01-01");
});

test("month ticks span onset to admission with year majors", () => {
  const p = fixturePathway();
  const ticks = monthTicks(p, WIDTH);
  expect(ticks.length).toBe(16); // Jan 2022 .. Apr 2023, nothing thinned
  expect(ticks[0]).toMatchObject({ x: 0, label: "2022", major: true });
  const majors = ticks.filter((t) => t.major);
  expect(majors.map((t) => t.label)).toEqual(["2022", "2023"]);
  for (let i = 1; i < ticks.length; i++) {
    expect(ticks[i]!.x).toBeGreaterThan(ticks[i - 1]!.x);
  }
});

test("tick thinning keeps majors and is deterministic", () => {
  const p = fixturePathway();
  const narrow = monthTicks(p, 200);
  expect(narrow.length).toBeLessThan(16);
  expect(narrow.filter((t) => t.major).map((t) => t.label)).toEqual([
    "2022",
    "2023",
  ]);
  expect(monthTicks(p, 200)).toEqual(narrow);
});

test("first tick lands on the first month boundary after a mid-month onset", () => {
  const p = fixturePathway();
  p.onset = "2022-01-15";
  const ticks = monthTicks(p, WIDTH);
  const firstDays = daysBetween("2022-01-15", "2022-02-01");
  expect(ticks[0]!.x).toBeCloseTo((firstDays / totalDays(p)) * WIDTH, 6);
  expect(ticks[0]!.label).toBe("Feb");
});
