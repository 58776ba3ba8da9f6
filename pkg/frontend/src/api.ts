/** Thin fetch wrappers over the annotation server endpoints. */

import { PostError } from "./queue.js";
import type {
  QualItem,
  QualResult,
  ResponseRecord,
  SessionPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const res = await fetch(url);
  if (!res.ok) throw new ApiError(await res.text(), res.status);
  return (await res.json()) as T;
}

async function postJson<T>(url: string, body: unknown): Promise<T> {
  const res = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) throw new ApiError(await res.text(), res.status);
  return (await res.json()) as T;
}

export async function fetchQualification(base: string): Promise<QualItem[]> {
  const data = await getJson<{ items: QualItem[] }>(`${base}/api/qualification`);
  return data.items;
}

export function submitQualification(
  base: string,
  workerId: string,
  answers: Record<string, "yes" | "no">,
): Promise<QualResult> {
  return postJson(`${base}/api/qualification`, {
    worker_id: workerId,
    answers,
  });
}

export function startSession(
  base: string,
  workerId: string,
): Promise<SessionPayload> {
  return postJson(`${base}/api/session`, { worker_id: workerId });
}

/** Poster for the delivery queue: network failures and 5xx retry, any 4xx
 * is permanent (retrying a rejected record would hammer the server). */
export function makePoster(
  base: string,
): (record: ResponseRecord) => Promise<void> {
  return async (record) => {
    let res: Response;
    try {
      res = await fetch(`${base}/api/response`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(record),
      });
    } catch (err) {
      throw new PostError(`network: ${String(err)}`, false);
    }
    if (!res.ok) {
      const detail = await res.text();
      throw new PostError(
        `${res.status}: ${detail}`,
        res.status >= 400 && res.status < 500,
      );
    }
  };
}
