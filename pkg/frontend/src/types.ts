/** Snapshot schema as served by the session service. */

export interface HypothesisRow {
  type: string;
  lf: string;
}

export interface PropositionRow {
  id: string;
  lf: string;
  sources: string[];
  derived: boolean;
}

export interface ReadingRow {
  unscoped: string;
  coindexed: string;
  scoped: string;
  order: string[];
  verdict: "PLAUSIBLE" | "IMPLAUSIBLE";
  constraint: string | null;
  context_lfs: string[];
}

export interface ReferentRow {
  marker: string;
  var: string;
  restrictor: string;
  entities: string[];
}

export interface WorldInfo {
  name: string;
  entities: string[];
  facts: string[];
  constraints: string[];
}

export interface Snapshot {
  words: string[];
  blocked: boolean;
  hypotheses: HypothesisRow[];
  propositions: PropositionRow[];
  readings: ReadingRow[];
  context: string | null;
  context_vars: string[];
  referents: ReferentRow[];
  events: string[];
  world: WorldInfo;
}

export interface SessionResponse {
  id: string;
  snapshot: Snapshot;
}
