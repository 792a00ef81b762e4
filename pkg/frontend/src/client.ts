/** Thin fetch wrapper over the session service routes. */

import type { SessionResponse } from "./types";

export class ServiceError extends Error {
  constructor(
    public status: number,
    message: string,
    public suggestions: string[] = [],
  ) {
    super(message);
  }
}

async function unwrap(res: Response): Promise<SessionResponse> {
  if (res.ok) {
    return (await res.json()) as SessionResponse;
  }
  let detail: unknown = null;
  try {
    detail = (await res.json()).detail;
  } catch {
    /* non-JSON error body */
  }
  if (detail && typeof detail === "object" && "error" in (detail as object)) {
    const d = detail as { error: string; suggestions?: string[] };
    throw new ServiceError(res.status, d.error, d.suggestions ?? []);
  }
  throw new ServiceError(res.status, String(detail ?? res.statusText));
}

export class SessionClient {
  constructor(private base: string = "") {}

  async create(world: string, lexicon = "demo"): Promise<SessionResponse> {
    const res = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ world, lexicon }),
    });
    return unwrap(res);
  }

  async feed(id: string, word: string): Promise<SessionResponse> {
    const res = await fetch(`${this.base}/sessions/${id}/words`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ word }),
    });
    return unwrap(res);
  }

  async undo(id: string): Promise<SessionResponse> {
    const res = await fetch(`${this.base}/sessions/${id}/undo`, { method: "POST" });
    return unwrap(res);
  }

  async get(id: string): Promise<SessionResponse> {
    return unwrap(await fetch(`${this.base}/sessions/${id}`));
  }

  async remove(id: string): Promise<void> {
    await fetch(`${this.base}/sessions/${id}`, { method: "DELETE" });
  }
}
