/**
 * Golden render of the bundled demo session: the service payload is frozen
 * in tests/fixtures and the markup snapshot must not drift between builds.
 */

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import {
  renderCounterfactualBatch,
  renderCounterfactualText,
  renderDataRow,
  renderMetricsHistory,
  renderPatternList,
} from "../src/render.js";
import { CHANGED_COLOR, KEPT_COLOR } from "../src/theme.js";
import { Counterfactual, DataRow, LabelDef } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
  readFileSync(join(here, "fixtures", "demo_snapshot.json"), "utf-8"),
);

const labels: LabelDef[] = fixture.summary.labels;
const records: Counterfactual[] = fixture.counterfactuals;

describe("counterfactual rendering", () => {
  const priceRecord = records.find((r) => r.target_label === "price")!;

  it("renders kept tokens gray and inserted tokens black", () => {
    expect(priceRecord.text).toBe("Breakfast was pretty cheap");
    const html = renderCounterfactualText(priceRecord);
    const tokens = html.split(/(?=<span class="tok")/);
    expect(tokens).toHaveLength(4);
    // kept: "Breakfast was"
    expect(tokens[0]).toContain(`color:${KEPT_COLOR}`);
    expect(tokens[1]).toContain(`color:${KEPT_COLOR}`);
    // inserted: "pretty cheap"
    expect(tokens[2]).toContain(`color:${CHANGED_COLOR}`);
    expect(tokens[3]).toContain(`color:${CHANGED_COLOR}`);
  });

  it("washes the rule-matched span with the original label's theme color", () => {
    const productsColor = labels.find((l) => l.key === "products")!.color;
    const html = renderCounterfactualText(priceRecord);
    const tokens = html.split(/(?=<span class="tok")/);
    const matched = priceRecord.matched_span;
    for (let i = matched.start; i < matched.end; i++) {
      expect(tokens[i]).toContain(productsColor);
    }
    expect(tokens[0]).not.toContain(productsColor);
  });

  it("is a pure function of the served payload", () => {
    const once = renderCounterfactualBatch("y01: Breakfast was delicious", ["products"], records, labels);
    const twice = renderCounterfactualBatch("y01: Breakfast was delicious", ["products"], records, labels);
    expect(once).toBe(twice);
  });

  it("matches the golden snapshot", () => {
    const html = renderCounterfactualBatch(
      "y01: Breakfast was delicious",
      ["products"],
      records,
      labels,
    );
    expect(html).toMatchSnapshot();
  });

  it("collapses resolved rows visually", () => {
    const resolved = { ...priceRecord, status: "accepted" as const };
    const html = renderCounterfactualBatch("y01", ["products"], [resolved], labels);
    expect(html).toContain("cf-resolved");
    expect(html).not.toContain("data-decision");
  });
});

describe("pattern list", () => {
  it("renders clickable rules per label and marks the active filter", () => {
    const html = renderPatternList(fixture.patterns, labels, "(delicious)|(good)");
    expect(html).toContain("(delicious)|(good)");
    expect(html).toContain("rule-active");
  });

  it("shows a placeholder for labels without rules", () => {
    const html = renderPatternList({}, labels, null);
    expect(html).toContain("no rules yet");
  });

  it("matches the golden snapshot", () => {
    expect(renderPatternList(fixture.patterns, labels, null)).toMatchSnapshot();
  });
});

describe("data rows", () => {
  it("highlights match spans and renders label chips in theme colors", () => {
    const rows: DataRow[] = fixture.data.rows;
    const labeled = rows.find((r) => r.labels.includes("products"))!;
    const productsColor = labels.find((l) => l.key === "products")!.color;
    const html = renderDataRow(labeled, labels);
    expect(html).toContain(productsColor);
  });

  it("matches the golden snapshot", () => {
    const rows: DataRow[] = fixture.data.rows;
    const html = rows.map((row) => renderDataRow(row, labels)).join("\n");
    expect(html).toMatchSnapshot();
  });
});

describe("metrics history", () => {
  it("appends one point per retrain", () => {
    const html = renderMetricsHistory(fixture.metrics);
    expect(html.match(/<li>/g)).toHaveLength(fixture.metrics.length);
  });

  it("renders an empty state for a cold session", () => {
    expect(renderMetricsHistory([])).toContain("no retrains yet");
  });
});

describe("rule changes since last retrain", () => {
  it("is empty with fewer than two retrains", async () => {
    const { renderRuleChanges } = await import("../src/render.js");
    expect(renderRuleChanges([])).toBe("");
    expect(renderRuleChanges(fixture.metrics.slice(0, 1))).toBe("");
  });

  it("marks added and removed rules", async () => {
    const { renderRuleChanges } = await import("../src/render.js");
    const before = { ...fixture.metrics[0], patterns: { products: ["(delicious)|(good)"] } };
    const after = { ...fixture.metrics[0], patterns: { products: ["(delicious)|[good]"] } };
    const html = renderRuleChanges([before, after]);
    expect(html).toContain("rule-added");
    expect(html).toContain("(delicious)|[good]");
    expect(html).toContain("rule-removed");
    expect(html).toContain("(delicious)|(good)");
  });

  it("reports unchanged rules", async () => {
    const { renderRuleChanges } = await import("../src/render.js");
    const entry = { ...fixture.metrics[0], patterns: { products: ["(delicious)"] } };
    expect(renderRuleChanges([entry, entry])).toContain("rules unchanged");
  });
});
