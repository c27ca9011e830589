/** Document shapes exchanged with the pathway service. */

export interface EventDoc {
  event_id: string;
  category: string;
  code: string;
  custom_label: string | null;
  date: string; // ISO yyyy-mm-dd
  order: number;
}

export interface PathwayDoc {
  subject_id: string;
  onset: string;
  consent: string;
  admission: string;
  version: number;
  events: EventDoc[];
}

export interface PathwayResponse {
  schema_version: number;
  pathway: PathwayDoc;
  last_modified?: string;
}

export interface PathwaySummary {
  subject_id: string;
  version: number;
  event_count: number;
  onset: string;
  consent: string;
  admission: string;
  last_modified: string;
}

export interface CatalogNode {
  code: string;
  display_name: string;
}

export interface CatalogDoc {
  schema_version: number;
  categories: { category: string; nodes: CatalogNode[] }[];
}

export interface Violation {
  rule_code: string;
  message: string;
  event_id: string | null;
}

export interface EventSpec {
  category: string;
  code: string;
  date: string;
  custom_label?: string | null;
  order?: number;
  expected_version?: number;
}

export interface EventPatch {
  category?: string;
  code?: string;
  date?: string;
  custom_label?: string | null;
  order?: number;
  expected_version?: number;
}
