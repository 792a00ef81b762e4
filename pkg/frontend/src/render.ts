/**
 * Pure snapshot -> view model functions. No fetches, no DOM: identical
 * snapshots always produce identical view models, so the whole module is
 * testable on recorded fixtures without the service.
 */

import type { ReadingRow, Snapshot } from "./types";

export const MAX_READINGS = 8;

export interface ChipView {
  id: string;
  tags: string[];
  highlighted: boolean;
}

export interface ReadingView {
  lf: string;
  verdict: "PLAUSIBLE" | "IMPLAUSIBLE";
  constraint: string | null;
  contextLfs: string[];
}

export interface ViewState {
  words: string[];
  canUndo: boolean;
  inputEnabled: boolean;
  blocked: boolean;
  banner: string | null;
  hypotheses: { type: string; lf: string }[];
  readings: ReadingView[];
  readingsOverflow: number;
  context: string | null;
  chips: ChipView[];
  events: string[];
}

/** Tags shown on an entity chip: the predicates its facts mention. */
export function chipTags(entity: string, facts: string[]): string[] {
  const tags: string[] = [];
  for (const fact of facts) {
    const open = fact.indexOf("(");
    if (open < 0) continue;
    const pred = fact.slice(0, open);
    const args = fact.slice(open + 1, fact.length - 1).split(",");
    if (args.includes(entity) && !tags.includes(pred)) {
      tags.push(pred);
    }
  }
  return tags.sort();
}

/** The referent set highlighted on the world panel: the outermost
 * definite description currently under construction. */
export function highlightSet(snapshot: Snapshot): Set<string> {
  const first = snapshot.referents.find((r) => r.marker === "the:0");
  return new Set(first ? first.entities : []);
}

export function interruptionBanner(snapshot: Snapshot): string | null {
  if (!snapshot.blocked) return null;
  const event = [...snapshot.events].reverse().find((e) => e.startsWith("BLOCKED"));
  const m = event ? /constraint=([^ ]+)/.exec(event) : null;
  const name = m ? m[1] : "world knowledge";
  return `Blocked: every reading violates the constraint "${name}".`;
}

function readingView(r: ReadingRow): ReadingView {
  return {
    lf: r.scoped,
    verdict: r.verdict,
    constraint: r.constraint,
    contextLfs: r.context_lfs,
  };
}

export function buildViewModel(snapshot: Snapshot): ViewState {
  const highlighted = highlightSet(snapshot);
  const readings = snapshot.readings.slice(0, MAX_READINGS).map(readingView);
  return {
    words: [...snapshot.words],
    canUndo: snapshot.words.length > 0,
    inputEnabled: !snapshot.blocked,
    blocked: snapshot.blocked,
    banner: interruptionBanner(snapshot),
    hypotheses: snapshot.hypotheses.map((h) => ({ type: h.type, lf: h.lf })),
    readings,
    readingsOverflow: Math.max(0, snapshot.readings.length - MAX_READINGS),
    context: snapshot.context,
    chips: snapshot.world.entities.map((id) => ({
      id,
      tags: chipTags(id, snapshot.world.facts),
      highlighted: highlighted.has(id),
    })),
    events: [...snapshot.events],
  };
}
