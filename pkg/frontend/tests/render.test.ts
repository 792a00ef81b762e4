/**
 * Workbench rendering over recorded snapshot fixtures: no service, no
 * DOM -- the snapshot-to-view-model mapping is a pure function.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildViewModel, chipTags, highlightSet, interruptionBanner, MAX_READINGS } from "../src/render";
import type { Snapshot } from "../src/types";

interface FixtureStep {
  word: string | null;
  snapshot?: Snapshot;
  error?: string;
}

interface Fixture {
  scenario: string;
  world: string;
  text: string;
  steps: FixtureStep[];
}

function fixture(name: string): Fixture {
  const path = join(__dirname, "..", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf-8")) as Fixture;
}

function snapshots(f: Fixture): Snapshot[] {
  return f.steps.filter((s) => s.snapshot).map((s) => s.snapshot as Snapshot);
}

describe("render purity", () => {
  it("identical snapshots produce identical view models", () => {
    for (const name of ["worked_example", "rabbit_boxes", "punch"]) {
      for (const snap of snapshots(fixture(name))) {
        const a = buildViewModel(snap);
        const b = buildViewModel(JSON.parse(JSON.stringify(snap)) as Snapshot);
        expect(a).toEqual(b);
      }
    }
  });

  it("renders every recorded step to a stable view model", () => {
    for (const name of ["worked_example", "rabbit_hat", "rabbit_boxes", "punch"]) {
      for (const snap of snapshots(fixture(name))) {
        const view = buildViewModel(snap);
        expect(view.words).toEqual(snap.words);
        expect(view.chips.length).toBe(snap.world.entities.length);
        expect(view.readings.length).toBeLessThanOrEqual(MAX_READINGS);
        expect(view.readings.length + view.readingsOverflow)
          .toBe(Math.max(snap.readings.length, Math.min(snap.readings.length, MAX_READINGS)));
      }
    }
  });
});

describe("worked example (criterion 1 scenario)", () => {
  const steps = snapshots(fixture("worked_example"));
  const last = steps[steps.length - 1];

  it("final hypothesis panel shows the module-1 lambda", () => {
    const view = buildViewModel(last);
    expect(view.hypotheses).toEqual([
      { type: "e->t", lf: "lam(z,show(q(forall,x,parent(x)),pro(y),z))" },
    ]);
  });

  it("both context logical forms appear among the readings", () => {
    const view = buildViewModel(last);
    const ctxs = view.readings.flatMap((r) => r.contextLfs);
    expect(ctxs).toContain(
      "exists(w,true,and(tower(w),and(has(london,w)," +
      "forall(x,parent(x),exists(z,true,show(x,w,z))))))");
    expect(ctxs).toContain(
      "exists(w,true,exists(z,true,and(tower(w),and(has(london,w)," +
      "forall(x,parent(x),show(x,w,z))))))");
  });

  it("undo affordance follows the word count", () => {
    expect(buildViewModel(steps[0]).canUndo).toBe(false);
    expect(buildViewModel(last).canUndo).toBe(true);
  });
});

describe("rabbit scenarios (criterion 7 scenario)", () => {
  it("the highlight narrows to a single chip in the hat scenario", () => {
    const steps = snapshots(fixture("rabbit_hat"));
    const final = buildViewModel(steps[steps.length - 1]);
    const lit = final.chips.filter((c) => c.highlighted);
    expect(lit.map((c) => c.id)).toEqual(["r1"]);
  });

  it("the containerless rabbit comes back in the boxes scenario", () => {
    const steps = snapshots(fixture("rabbit_boxes"));
    const byWords = new Map(steps.map((s) => [s.words.join(" "), s]));
    const afterIn = highlightSet(byWords.get("the rabbit in")!);
    const afterNone = highlightSet(byWords.get("the rabbit in none")!);
    expect([...afterIn]).toEqual(["r1"]);
    expect([...afterNone]).toEqual(["r2"]); // grew back: not a subset
    const final = buildViewModel(steps[steps.length - 1]);
    expect(final.chips.filter((c) => c.highlighted).map((c) => c.id)).toEqual(["r2"]);
  });

  it("chips carry predicate tags from the world facts", () => {
    const steps = snapshots(fixture("rabbit_hat"));
    const view = buildViewModel(steps[0]);
    const r1 = view.chips.find((c) => c.id === "r1")!;
    expect(r1.tags).toEqual(["in", "rabbit"]);
  });
});

describe("punch scenario (criterion 8 scenario)", () => {
  const steps = snapshots(fixture("punch"));
  const last = steps[steps.length - 1];

  it("raises the interruption banner naming the constraint", () => {
    const view = buildViewModel(last);
    expect(view.blocked).toBe(true);
    expect(view.banner).toBe(
      'Blocked: every reading violates the constraint "bolted".');
    expect(view.inputEnabled).toBe(false);
  });

  it("banner is absent before the blocking word", () => {
    for (const snap of steps.slice(0, -1)) {
      expect(interruptionBanner(snap)).toBeNull();
    }
  });

  it("readings carry implausibility badges at the block", () => {
    const view = buildViewModel(last);
    expect(view.readings.length).toBeGreaterThan(0);
    expect(view.readings.every((r) => r.verdict === "IMPLAUSIBLE")).toBe(true);
  });
});

describe("chipTags", () => {
  it("collects predicates mentioning the entity", () => {
    const facts = ["rabbit(r1)", "in(r1,h1)", "hat(h1)"];
    expect(chipTags("r1", facts)).toEqual(["in", "rabbit"]);
    expect(chipTags("h1", facts)).toEqual(["hat", "in"]);
    expect(chipTags("nowhere", facts)).toEqual([]);
  });
});
