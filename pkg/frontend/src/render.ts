/**
 * Pure HTML renderers. Every function maps served payloads to markup with
 * no reordering, no client-side diffing and no hidden state, so a snapshot
 * of the output is a faithful picture of what the service sent.
 */

import {
  Counterfactual,
  DataRow,
  LabelDef,
  RetrainEntry,
  ScoredPattern,
} from "./types.js";
import { baseStyle, chipStyle, ruleWash } from "./theme.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function labelByKey(labels: LabelDef[], key: string): LabelDef {
  const found = labels.find((l) => l.key === key);
  return found ?? { key, display: key, color: "#666666" };
}

export function labelChip(label: LabelDef): string {
  return `<span class="chip" style="${chipStyle(label.color)}">${escapeHtml(label.display)}</span>`;
}

/** Counterfactual text: base spans tile the tokens, theme spans overlay. */
export function renderCounterfactualText(cf: Counterfactual): string {
  const words = cf.sentence.tokens.map((t) => t.t);
  const base = cf.render_spans.filter((s) => s.style !== "rule_theme");
  const overlays = cf.render_spans.filter((s) => s.style === "rule_theme");
  const pieces: string[] = [];
  for (let i = 0; i < words.length; i++) {
    const seg = base.find((s) => s.start <= i && i < s.end);
    const overlay = overlays.find((s) => s.start <= i && i < s.end);
    let style = seg ? baseStyle(seg.style as "kept_gray" | "changed_black") : "";
    if (overlay && overlay.color) {
      style += `;${ruleWash(overlay.color)}`;
    }
    pieces.push(`<span class="tok" style="${style}">${escapeHtml(words[i])}</span>`);
  }
  return pieces.join(" ");
}

/** One counterfactual row: target chip, rendered text, resolution controls. */
export function renderCounterfactualRow(cf: Counterfactual, labels: LabelDef[]): string {
  const target = labelByKey(labels, cf.target_label);
  const resolved = cf.status !== "proposed";
  const controls = resolved
    ? `<span class="status status-${cf.status}">${cf.status}</span>`
    : `<button data-cf="${cf.id}" data-decision="accept">accept</button>` +
      `<button data-cf="${cf.id}" data-decision="reject">reject</button>` +
      `<button data-cf="${cf.id}" data-decision="relabel">relabel</button>`;
  return (
    `<div class="cf-row${resolved ? " cf-resolved" : ""}" data-id="${cf.id}">` +
    `${labelChip(target)}<span class="cf-text">${renderCounterfactualText(cf)}</span>` +
    `<span class="cf-rule">rule: <code>${escapeHtml(cf.pattern)}</code></span>` +
    `<span class="cf-controls">${controls}</span></div>`
  );
}

/** Batch grouped under its original sentence, one row per target label. */
export function renderCounterfactualBatch(
  originalText: string,
  originalLabels: string[],
  records: Counterfactual[],
  labels: LabelDef[],
): string {
  const chips = originalLabels.map((k) => labelChip(labelByKey(labels, k))).join("");
  const rows = records.map((cf) => renderCounterfactualRow(cf, labels)).join("");
  return (
    `<section class="cf-batch"><header>` +
    `<span class="cf-original">${escapeHtml(originalText)}</span>${chips}</header>` +
    `${rows}</section>`
  );
}

/** Clickable rule list; the active rule filters the data view. */
export function renderPatternList(
  patterns: Record<string, ScoredPattern[]>,
  labels: LabelDef[],
  activePattern: string | null,
): string {
  const sections = labels.map((label) => {
    const rules = patterns[label.key] ?? [];
    const items = rules.length
      ? rules
          .map((rule) => {
            const active = rule.pattern === activePattern ? " rule-active" : "";
            return (
              `<li><button class="rule${active}" data-pattern="${escapeHtml(rule.pattern)}"` +
              ` style="border-left:3px solid ${label.color}">` +
              `<code>${escapeHtml(rule.pattern)}</code>` +
              `<span class="rule-score">f1 ${rule.f1.toFixed(2)}</span></button></li>`
            );
          })
          .join("")
      : `<li class="rule-empty">no rules yet</li>`;
    return `<div class="rule-group">${labelChip(label)}<ul>${items}</ul></div>`;
  });
  return sections.join("");
}

/** One data row: sentence, label chips or suggestions, match highlights. */
export function renderDataRow(row: DataRow, labels: LabelDef[]): string {
  const words = row.sentence.tokens.map((t) => t.t);
  const highlighted = new Set<number>();
  for (const span of row.spans) {
    for (let i = span.start; i < span.end; i++) highlighted.add(i);
  }
  const text = words
    .map((w, i) =>
      highlighted.has(i)
        ? `<mark>${escapeHtml(w)}</mark>`
        : escapeHtml(w),
    )
    .join(" ");
  const chips = row.labels.map((k) => labelChip(labelByKey(labels, k))).join("");
  const suggestions = row.suggested
    .map(([key, score]) => {
      const label = labelByKey(labels, key);
      return (
        `<button class="suggest" data-sentence="${row.sentence.id}" data-label="${label.key}"` +
        ` style="${chipStyle(label.color)}">${escapeHtml(label.display)} ${score.toFixed(2)}?</button>`
      );
    })
    .join("");
  const badge = row.held_out ? `<span class="held-out">held out</span>` : "";
  return (
    `<div class="data-row" data-sentence="${row.sentence.id}">` +
    `<span class="data-text">${text}</span>` +
    `<span class="data-labels">${chips}${suggestions}${badge}</span></div>`
  );
}

/** Added/removed rules between the last two retrains. */
export function renderRuleChanges(history: RetrainEntry[]): string {
  if (history.length < 2) {
    return "";
  }
  const before = history[history.length - 2].patterns;
  const after = history[history.length - 1].patterns;
  const lines: string[] = [];
  const keys = new Set([...Object.keys(before), ...Object.keys(after)]);
  for (const key of [...keys].sort()) {
    const old = new Set(before[key] ?? []);
    const now = new Set(after[key] ?? []);
    for (const rule of [...now].sort()) {
      if (!old.has(rule)) lines.push(`<li class="rule-added">${key}: + <code>${escapeHtml(rule)}</code></li>`);
    }
    for (const rule of [...old].sort()) {
      if (!now.has(rule)) lines.push(`<li class="rule-removed">${key}: &minus; <code>${escapeHtml(rule)}</code></li>`);
    }
  }
  if (!lines.length) {
    return `<p class="metrics-empty">rules unchanged since last retrain</p>`;
  }
  return `<ul class="rule-diff">${lines.join("")}</ul>`;
}


/** Retrain history: micro F1 per retrain, latest rules per label. */
export function renderMetricsHistory(history: RetrainEntry[]): string {
  if (!history.length) {
    return `<p class="metrics-empty">no retrains yet</p>`;
  }
  const points = history
    .map((entry, index) => {
      const micro = entry.with_counterfactuals.micro;
      const without = entry.without_counterfactuals?.micro;
      const extra = without ? ` (without cf: ${without.f1.toFixed(3)})` : "";
      const note = entry.with_counterfactuals.evaluated ? "" : " — holdout not scored";
      return (
        `<li>retrain ${index + 1}: micro F1 ${micro.f1.toFixed(3)}` +
        `, P ${micro.precision.toFixed(3)}, R ${micro.recall.toFixed(3)}${extra}${note}</li>`
      );
    })
    .join("");
  return `<ol class="metrics-history">${points}</ol>`;
}
