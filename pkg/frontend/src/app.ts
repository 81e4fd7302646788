/**
 * Single-session workbench page. State is whatever the service last said:
 * every mutation round-trips through the API and re-renders from fresh
 * payloads, so a refresh can never lose or invent labels.
 */

import { api, ApiError } from "./api.js";
import {
  renderCounterfactualBatch,
  renderDataRow,
  renderMetricsHistory,
  renderPatternList,
  renderRuleChanges,
} from "./render.js";
import { Counterfactual, DataRow, LabelDef, SessionSummary } from "./types.js";

let sessionId = "";
let labels: LabelDef[] = [];
let activePattern: string | null = null;
let lastRevision = 0;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function ensureSession(): Promise<SessionSummary> {
  const existing = await api.listSessions();
  if (existing.length) return existing[existing.length - 1];
  return api.createFixtureSession("demo", 11);
}

async function refreshAll(): Promise<void> {
  const [summary, patterns, page, queue, history] = await Promise.all([
    api.summary(sessionId),
    api.patterns(sessionId),
    api.data(sessionId, activePattern ? { pattern: activePattern, page_size: "50" } : { page_size: "50" }),
    api.queue(sessionId),
    api.metrics(sessionId),
  ]);
  labels = summary.labels;
  lastRevision = summary.revision;
  el("session-meta").textContent =
    `${summary.session_id} — ${summary.labeled}/${summary.corpus_size} labeled, ` +
    `${summary.retrains} retrain(s), revision ${summary.revision}`;
  el("patterns").innerHTML =
    renderRuleChanges(history) + renderPatternList(patterns, labels, activePattern);
  el("data").innerHTML = page.rows.map((row: DataRow) => renderDataRow(row, labels)).join("");
  renderQueue(queue);
  el("metrics").innerHTML = renderMetricsHistory(history);
}

function renderQueue(queue: Counterfactual[]): void {
  const byOriginal = new Map<string, Counterfactual[]>();
  for (const record of queue) {
    const bucket = byOriginal.get(record.original_id) ?? [];
    bucket.push(record);
    byOriginal.set(record.original_id, bucket);
  }
  const sections: string[] = [];
  for (const [originalId, records] of byOriginal) {
    const original = records[0];
    sections.push(
      renderCounterfactualBatch(
        `${originalId}: ${originalText(original)}`,
        [original.original_label],
        records,
        labels,
      ),
    );
  }
  el("queue").innerHTML = sections.join("") || `<p class="metrics-empty">no counterfactuals queued</p>`;
}

function originalText(record: Counterfactual): string {
  const kept = record.edit_script
    .filter((run) => run.op !== "insert")
    .flatMap((run) => run.tokens);
  return kept.join(" ");
}

function showError(error: unknown): void {
  const box = el("error");
  box.textContent = error instanceof ApiError ? `${error.status}: ${error.message}` : String(error);
  setTimeout(() => (box.textContent = ""), 6000);
}

async function onClick(event: Event): Promise<void> {
  const target = event.target as HTMLElement;
  try {
    const rule = target.closest<HTMLElement>("button.rule");
    if (rule) {
      const pattern = rule.dataset.pattern ?? null;
      activePattern = activePattern === pattern ? null : pattern; // re-click clears
      await refreshAll();
      return;
    }
    const suggest = target.closest<HTMLElement>("button.suggest");
    if (suggest) {
      const sentenceId = suggest.dataset.sentence!;
      await api.submitLabels(sessionId, sentenceId, [suggest.dataset.label!], lastRevision);
      await api.requestCounterfactuals(sessionId, sentenceId).catch(showError);
      await refreshAll();
      return;
    }
    const dataRow = target.closest<HTMLElement>(".data-row");
    if (dataRow && target.classList.contains("data-text")) {
      const picked = promptLabels(`labels for ${dataRow.dataset.sentence}`);
      if (picked !== null) {
        await api.submitLabels(sessionId, dataRow.dataset.sentence!, picked, lastRevision);
        if (picked.length) {
          await api.requestCounterfactuals(sessionId, dataRow.dataset.sentence!).catch(showError);
        }
        await refreshAll();
      }
      return;
    }
    const resolveButton = target.closest<HTMLElement>("button[data-cf]");
    if (resolveButton) {
      const decision = resolveButton.dataset.decision!;
      const cfId = resolveButton.dataset.cf!;
      if (decision === "relabel") {
        const picked = promptLabels("relabel with");
        if (picked === null) return;
        await api.resolve(sessionId, cfId, "relabel", picked, lastRevision);
      } else {
        await api.resolve(sessionId, cfId, decision, undefined, lastRevision);
      }
      await refreshAll();
      return;
    }
    if (target.id === "retrain") {
      target.setAttribute("disabled", "disabled");
      try {
        await api.retrain(sessionId);
      } finally {
        target.removeAttribute("disabled");
      }
      await refreshAll();
    }
  } catch (error) {
    showError(error);
    if (error instanceof ApiError && error.status === 409) {
      await refreshAll(); // stale revision: reload served state
    }
  }
}

function promptLabels(message: string): string[] | null {
  const keys = labels.map((l) => l.key).join(", ");
  const answer = window.prompt(`${message} (comma-separated of: ${keys})`, "");
  if (answer === null) return null;
  return answer
    .split(",")
    .map((part) => part.trim())
    .filter(Boolean);
}

export async function start(): Promise<void> {
  const summary = await ensureSession();
  sessionId = summary.session_id;
  document.body.addEventListener("click", (event) => {
    void onClick(event);
  });
  await refreshAll();
}

if (typeof document !== "undefined" && document.getElementById("app-root")) {
  void start().catch(showError);
}
