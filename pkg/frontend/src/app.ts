/**
 * Workbench wiring: one session, one in-flight request, panels rendered
 * from the latest snapshot only.
 */

import { SessionClient, ServiceError } from "./client";
import { buildViewModel, ViewState } from "./render";
import type { Snapshot } from "./types";

const client = new SessionClient("http://127.0.0.1:8940");

let sessionId: string | null = null;
let busy = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderInto(view: ViewState): void {
  const tape = el<HTMLDivElement>("word-tape");
  tape.textContent = "";
  for (const word of view.words) {
    const span = document.createElement("span");
    span.className = "word";
    span.textContent = word;
    tape.appendChild(span);
  }

  el<HTMLButtonElement>("undo").disabled = !view.canUndo || busy;
  el<HTMLInputElement>("word-input").disabled = !view.inputEnabled || busy;

  const banner = el<HTMLDivElement>("banner");
  banner.textContent = view.banner ?? "";
  banner.style.display = view.banner ? "block" : "none";

  const hyps = el<HTMLUListElement>("hypotheses");
  hyps.textContent = "";
  for (const h of view.hypotheses) {
    const li = document.createElement("li");
    li.innerHTML = `<code>${h.lf}</code> <small>${h.type}</small>`;
    hyps.appendChild(li);
  }

  const readings = el<HTMLUListElement>("readings");
  readings.textContent = "";
  for (const r of view.readings) {
    const li = document.createElement("li");
    const badge = r.verdict === "PLAUSIBLE" ? "ok" : "bad";
    const name = r.constraint ? ` (${r.constraint})` : "";
    li.innerHTML = `<code>${r.lf}</code> <span class="badge ${badge}">${r.verdict}${name}</span>`;
    for (const c of r.contextLfs) {
      const div = document.createElement("div");
      div.className = "ctx";
      div.innerHTML = `<code>${c}</code>`;
      li.appendChild(div);
    }
    readings.appendChild(li);
  }
  const overflow = el<HTMLDivElement>("readings-overflow");
  overflow.textContent = view.readingsOverflow
    ? `+${view.readingsOverflow} more readings`
    : "";

  const world = el<HTMLDivElement>("world-panel");
  world.textContent = "";
  for (const chip of view.chips) {
    const node = document.createElement("span");
    node.className = chip.highlighted ? "chip highlight" : "chip";
    node.textContent = chip.id;
    node.title = chip.tags.join(", ");
    world.appendChild(node);
  }

  const ctx = el<HTMLDivElement>("context");
  ctx.innerHTML = view.context ? `<code>${view.context}</code>` : "<em>(empty)</em>";

  const log = el<HTMLUListElement>("events");
  log.textContent = "";
  for (const event of view.events.slice(-12)) {
    const li = document.createElement("li");
    li.textContent = event;
    log.appendChild(li);
  }
}

function showError(message: string): void {
  el<HTMLDivElement>("error").textContent = message;
}

function applySnapshot(snapshot: Snapshot): void {
  showError("");
  renderInto(buildViewModel(snapshot));
}

async function guarded(action: () => Promise<Snapshot | null>): Promise<void> {
  if (busy) return;
  busy = true;
  try {
    const snap = await action();
    if (snap) applySnapshot(snap);
  } catch (e) {
    if (e instanceof ServiceError) {
      const hint = e.suggestions.length ? ` -- try: ${e.suggestions.join(", ")}` : "";
      showError(`${e.message}${hint}`);
    } else {
      showError(String(e));
    }
  } finally {
    busy = false;
  }
}

export async function submitWord(word: string): Promise<void> {
  const trimmed = word.trim();
  if (!trimmed || !sessionId) return;
  await guarded(async () => {
    const res = await client.feed(sessionId!, trimmed);
    el<HTMLInputElement>("word-input").value = "";
    return res.snapshot;
  });
}

export async function undoWord(): Promise<void> {
  if (!sessionId) return;
  await guarded(async () => (await client.undo(sessionId!)).snapshot);
}

async function startSession(world: string): Promise<void> {
  await guarded(async () => {
    if (sessionId) await client.remove(sessionId);
    const res = await client.create(world);
    sessionId = res.id;
    return res.snapshot;
  });
}

export function boot(): void {
  const input = el<HTMLInputElement>("word-input");
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") void submitWord(input.value);
  });
  el<HTMLButtonElement>("feed").addEventListener("click", () =>
    void submitWord(input.value));
  el<HTMLButtonElement>("undo").addEventListener("click", () => void undoWord());
  const picker = el<HTMLSelectElement>("world-picker");
  picker.addEventListener("change", () => void startSession(picker.value));
  void startSession(picker.value);
}

if (typeof document !== "undefined" && document.getElementById("word-input")) {
  boot();
}
