/**
 * Guided interview script. Each step frames one question; most steps point
 * at a single node type so the app can highlight the matching palette entry
 * while the interviewer fills the timeline in.
 */

export interface ScriptStep {
  id: string;
  title: string;
  prompt: string;
  category: "community" | "clinical" | "key" | "anchor" | null;
  code: string | null;
}

export const SCRIPT_STEPS: readonly ScriptStep[] = [
  {
    id: "framing",
    title: "Framing",
    prompt:
      "Let us now try to look at the pathways that led you here. " +
      "I am going to ask about the places and people you turned to for help, " +
      "and we will put each one on this timeline together.",
    category: null,
    code: null,
  },
  {
    id: "onset",
    title: "Onset",
    prompt:
      "First, let us confirm when the symptoms began. " +
      "Does the onset date on the left edge of the timeline look right to you?",
    category: "anchor",
    code: "Onset",
  },
  {
    id: "ed",
    title: "Emergency Department",
    prompt:
      "Between then and now, have you been to an Emergency Department? " +
      "If so, when, and how many times?",
    category: "clinical",
    code: "ED",
  },
  {
    id: "inpt",
    title: "Inpatient",
    prompt:
      "Were you ever admitted to a psychiatric inpatient unit? " +
      "When did each stay begin?",
    category: "clinical",
    code: "Inpt",
  },
  {
    id: "iop",
    title: "Intensive Outpatient",
    prompt:
      "Did you take part in an intensive outpatient or partial hospital program? When?",
    category: "clinical",
    code: "IOP",
  },
  {
    id: "pcp",
    title: "Primary Care",
    prompt:
      "Did you see your primary care provider about any of this? When?",
    category: "clinical",
    code: "PCP",
  },
  {
    id: "outpt",
    title: "Outpatient Mental Health",
    prompt:
      "Did you see an outpatient therapist, counselor, or psychiatrist? " +
      "When did those visits start?",
    category: "clinical",
    code: "Outpt",
  },
  {
    id: "acute",
    title: "Acute Evaluation",
    prompt:
      "Were you ever evaluated urgently, for example at a crisis or acute evaluation service? When?",
    category: "clinical",
    code: "Acute",
  },
  {
    id: "mobile",
    title: "Mobile Evaluation",
    prompt:
      "Did a mobile crisis team ever come to you? When?",
    category: "clinical",
    code: "Mobile",
  },
  {
    id: "othermh",
    title: "Other Mental Health",
    prompt:
      "Did you get help from any other mental health service we have not covered? What was it, and when?",
    category: "clinical",
    code: "OtherMH",
  },
  {
    id: "othermed",
    title: "Other Medical",
    prompt:
      "Did you see any other medical provider along the way? Who, and when?",
    category: "clinical",
    code: "OtherMed",
  },
  {
    id: "other",
    title: "Other",
    prompt:
      "Was there anything else, any service or place that does not fit the list, " +
      "that was part of getting help? Tell me what it was and when.",
    category: "clinical",
    code: "Other",
  },
  {
    id: "ap",
    title: "First Antipsychotic",
    prompt:
      "When were you first prescribed an antipsychotic medication for these symptoms? " +
      "There can only be one first time, so we will mark a single point.",
    category: "key",
    code: "AP",
  },
  {
    id: "community",
    title: "Community Fill-in",
    prompt:
      "Now let us fill in the people around you. Who first noticed something was wrong, " +
      "or helped you seek care: you yourself, family, police, a teacher or counselor, or someone else? " +
      "Place each of those on the timeline too.",
    category: "community",
    code: null,
  },
  {
    id: "review",
    title: "Review",
    prompt:
      "Let us look back at the data we have collected. Is anything missing, " +
      "and are the interactions in the correct order?",
    category: null,
    code: null,
  },
];

export function stepIndex(id: string): number {
  return SCRIPT_STEPS.findIndex((s) => s.id === id);
}

export function stepById(id: string): ScriptStep {
  const step = SCRIPT_STEPS[stepIndex(id)];
  if (!step) throw new Error(`unknown script step: ${id}`);
  return step;
}

/** Advance one step; the review step is terminal and repeats forever. */
export function nextStep(id: string): ScriptStep {
  const i = stepIndex(id);
  const last = SCRIPT_STEPS.length - 1;
  return SCRIPT_STEPS[Math.min(i < 0 ? 0 : i + 1, last)] as ScriptStep;
}

export function prevStep(id: string): ScriptStep {
  const i = stepIndex(id);
  return SCRIPT_STEPS[Math.max(0, i - 1)] as ScriptStep;
}

export function isReview(id: string): boolean {
  return id === "review";
}
