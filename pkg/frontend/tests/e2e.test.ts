/**
 * End-to-end: spawn the real service and drive it the way the page does,
 * through ApiClient only. Confirms the client-side ordering mirrors the
 * server's export and that a scripted interview reproduces the worked
 * example byte for byte.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, expect, test } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { sequenceCodes } from "../src/layout.js";

const PORT = 40000 + (process.pid % 9000);
const BASE = `http://127.0.0.1:${PORT}`;

const GOLDEN =
  "Example123,Onset,Family,Police,ED,Inpt,AP,Family,Acute,Outpt,Self," +
  "Consent,Admission\n" +
  ",01/01/22,04/14/22,06/20/22,06/20/22,07/17/22,07/27/22,09/13/22," +
  "09/13/22,10/02/22,03/06/23,04/05/23,04/05/23\n";

// the nine interactions in the order an interview would surface them
const INTERVIEW: [string, string, string][] = [
  ["community", "Family", "2022-04-14"],
  ["community", "Police", "2022-06-20"],
  ["clinical", "ED", "2022-06-20"],
  ["clinical", "Inpt", "2022-07-17"],
  ["key", "AP", "2022-07-27"],
  ["community", "Family", "2022-09-13"],
  ["clinical", "Acute", "2022-09-13"],
  ["clinical", "Outpt", "2022-10-02"],
  ["community", "Self", "2023-03-06"],
];

let server: ChildProcess;
let dataDir: string;
const client = new ApiClient(BASE);

async function waitForHealthy(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service never became healthy");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "ptc-e2e-"));
  server = spawn("ptc", ["serve", "--data-dir", dataDir, "--bind", `127.0.0.1:${PORT}`], {
    stdio: "ignore",
  });
  await waitForHealthy();
}, 30_000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

/** The page's invariant: icon order on screen equals the export code row. */
async function expectMirrorsExport(subjectId: string): Promise<string[]> {
  const doc = await client.getPathway(subjectId);
  const csv = await client.exportCsv(subjectId);
  const codeRow = csv.split("\n")[0]!.split(",").slice(1);
  expect(sequenceCodes(doc.pathway)).toEqual(codeRow);
  return codeRow;
}

test("a scripted interview reproduces the worked example byte for byte", async () => {
  await client.createPathway({
    subject_id: "Example123",
    onset: "2022-01-01",
    consent: "2023-04-05",
    admission: "2023-04-05",
  });
  for (const [category, code, date] of INTERVIEW) {
    const before = await client.getPathway("Example123");
    await client.addEvent("Example123", {
      category,
      code,
      date,
      expected_version: before.pathway.version,
    });
    await expectMirrorsExport("Example123");
  }
  expect(await client.exportCsv("Example123")).toBe(GOLDEN);
}, 30_000);

test("edits and deletions keep the mirror intact", async () => {
  const subject = "edit-roundtrip";
  await client.createPathway({
    subject_id: subject,
    onset: "2021-01-01",
    consent: "2021-11-30",
    admission: "2021-12-01",
  });
  let doc = await client.addEvent(subject, {
    category: "clinical",
    code: "ED",
    date: "2021-02-01",
  });
  doc = await client.addEvent(subject, {
    category: "community",
    code: "Family",
    date: "2021-03-01",
    expected_version: doc.pathway.version,
  });
  await expectMirrorsExport(subject);

  // drag the ED visit past the family contact
  const ed = doc.pathway.events.find((e) => e.code === "ED")!;
  doc = await client.updateEvent(subject, ed.event_id, {
    date: "2021-04-01",
    expected_version: doc.pathway.version,
  });
  expect(await expectMirrorsExport(subject)).toEqual([
    "Onset", "Family", "ED", "Consent", "Admission",
  ]);

  doc = await client.removeEvent(subject, ed.event_id, doc.pathway.version);
  expect(doc.pathway.events.map((e) => e.code)).toEqual(["Family"]);
  await expectMirrorsExport(subject);
}, 30_000);

test("stale writes are refused with both version numbers", async () => {
  const doc = await client.getPathway("Example123");
  const error = (await client
    .addEvent("Example123", {
      category: "clinical",
      code: "PCP",
      date: "2022-05-01",
      expected_version: doc.pathway.version + 10,
    })
    .catch((e: unknown) => e)) as ApiError;
  expect(error).toBeInstanceOf(ApiError);
  expect(error.isConflict).toBe(true);
  expect(error.errorCode).toBe("VersionConflict");
  expect(error.current).toBe(doc.pathway.version);
  // the refused write changed nothing
  const after = await client.getPathway("Example123");
  expect(after.pathway.version).toBe(doc.pathway.version);
}, 30_000);

test("rule violations come back as 422 with their codes", async () => {
  const cases: [Record<string, string>, string][] = [
    [{ category: "community", code: "Other", date: "2022-02-01" }, "MISSING_CUSTOM_LABEL"],
    [{ category: "key", code: "AP", date: "2022-08-01" }, "DUPLICATE_AP"],
    [{ category: "clinical", code: "ED", date: "2024-01-01" }, "EVENT_OUT_OF_RANGE"],
    [{ category: "clinical", code: "Zzz", date: "2022-02-01" }, "UNKNOWN_NODE"],
  ];
  for (const [spec, expectedCode] of cases) {
    const error = (await client
      .addEvent("Example123", spec as { category: string; code: string; date: string })
      .catch((e: unknown) => e)) as ApiError;
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(422);
    expect(error.violations.map((v) => v.rule_code)).toContain(expectedCode);
  }
  // nothing stuck: the record still exports the golden bytes
  expect(await client.exportCsv("Example123")).toBe(GOLDEN);
}, 30_000);

test("the catalog drives the palette with all four groups", async () => {
  const catalog = await client.catalog();
  const byCategory = new Map(catalog.categories.map((g) => [g.category, g.nodes]));
  expect([...byCategory.keys()].sort()).toEqual([
    "anchor", "clinical", "community", "key",
  ]);
  expect(byCategory.get("key")?.map((n) => n.code)).toEqual(["AP"]);
  expect(byCategory.get("community")?.map((n) => n.code)).toContain("Family");
  expect(byCategory.get("clinical")?.map((n) => n.code)).toContain("ED");
}, 30_000);
