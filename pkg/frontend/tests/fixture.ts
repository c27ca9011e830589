/** The worked-example pathway as the service would return it. */

import type { EventDoc, PathwayDoc } from "../src/types.js";

function event(
  id: string,
  category: string,
  code: string,
  date: string,
  order = 0,
): EventDoc {
  return { event_id: id, category, code, custom_label: null, date, order };
}

export function fixturePathway(): PathwayDoc {
  return {
    subject_id: "Example123",
    onset: "2022-01-01",
    consent: "2023-04-05",
    admission: "2023-04-05",
    version: 10,
    // deliberately shuffled: ordering must come from (date, order), not
    // from array position
    events: [
      event("e9", "community", "Self", "2023-03-06"),
      event("e1", "community", "Family", "2022-04-14"),
      event("e7", "clinical", "Acute", "2022-09-13", 1),
      event("e2", "community", "Police", "2022-06-20", 0),
      event("e4", "clinical", "Inpt", "2022-07-17"),
      event("e3", "clinical", "ED", "2022-06-20", 1),
      event("e8", "clinical", "Outpt", "2022-10-02"),
      event("e5", "key", "AP", "2022-07-27"),
      event("e6", "community", "Family", "2022-09-13", 0),
    ],
  };
}

export const FIXTURE_SEQUENCE = [
  "Onset", "Family", "Police", "ED", "Inpt", "AP",
  "Family", "Acute", "Outpt", "Self", "Consent", "Admission",
];
