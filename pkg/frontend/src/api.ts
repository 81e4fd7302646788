/** Thin fetch wrapper over the session API; every mutation goes through it. */

import {
  Counterfactual,
  DataPage,
  RetrainEntry,
  ScoredPattern,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  const response = await fetch(path, {
    method,
    headers: body === undefined ? {} : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const payload = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, payload.detail ?? response.statusText);
  }
  return payload as T;
}

export const api = {
  listSessions: () => request<SessionSummary[]>("GET", "/api/sessions"),
  createFixtureSession: (fixture: string, seed: number) =>
    request<SessionSummary>("POST", "/api/sessions", {
      fixture,
      config: { seed, holdout_fraction: 0.0 },
    }),
  summary: (sid: string) => request<SessionSummary>("GET", `/api/sessions/${sid}`),
  data: (sid: string, params: Record<string, string>) => {
    const query = new URLSearchParams(params).toString();
    return request<DataPage>("GET", `/api/sessions/${sid}/data?${query}`);
  },
  patterns: (sid: string) =>
    request<Record<string, ScoredPattern[]>>("GET", `/api/sessions/${sid}/patterns`),
  submitLabels: (sid: string, sentenceId: string, labels: string[], expectedRevision?: number) =>
    request<{ revision: number; retrained: boolean }>(
      "POST",
      `/api/sessions/${sid}/labels`,
      { sentence_id: sentenceId, labels, expected_revision: expectedRevision ?? null },
    ),
  retrain: (sid: string) => request<RetrainEntry>("POST", `/api/sessions/${sid}/retrain`),
  requestCounterfactuals: (sid: string, sentenceId: string) =>
    request<Counterfactual[]>("POST", `/api/sessions/${sid}/counterfactuals`, {
      sentence_id: sentenceId,
    }),
  queue: (sid: string) =>
    request<Counterfactual[]>("GET", `/api/sessions/${sid}/counterfactuals`),
  resolve: (sid: string, cfId: string, decision: string, labels?: string[], expectedRevision?: number) =>
    request<{ revision: number }>(
      "POST",
      `/api/sessions/${sid}/counterfactuals/${cfId}/resolve`,
      { decision, labels, expected_revision: expectedRevision ?? null },
    ),
  metrics: (sid: string) => request<RetrainEntry[]>("GET", `/api/sessions/${sid}/metrics`),
};
