/** Wire types mirroring the session API payloads. */

export interface LabelDef {
  key: string;
  display: string;
  color: string;
}

export interface SessionSummary {
  session_id: string;
  revision: number;
  labels: LabelDef[];
  corpus_size: number;
  train_size: number;
  test_size: number;
  labeled: number;
  queue_size: number;
  retrains: number;
}

export interface TokenModel {
  t: string;
  l: string;
  p: string;
  e?: string | null;
}

export interface SentenceModel {
  id: string;
  text: string;
  tokens: TokenModel[];
}

export interface MatchSpan {
  sentence_id: string;
  start: number;
  end: number;
  branch: number;
  atom_spans: number[][];
}

export interface ScoredPattern {
  pattern: string;
  precision: number;
  recall: number;
  f1: number;
  support: number;
  weight?: number | null;
}

export interface DataRow {
  sentence: SentenceModel;
  labels: string[];
  source?: string | null;
  suggested: [string, number][];
  spans: MatchSpan[];
  held_out: boolean;
}

export interface DataPage {
  rows: DataRow[];
  page: number;
  page_size: number;
  total: number;
}

export interface RenderSpan {
  start: number;
  end: number;
  style: "kept_gray" | "changed_black" | "rule_theme";
  color?: string | null;
}

export interface EditRun {
  op: "keep" | "insert" | "delete";
  tokens: string[];
}

export interface Counterfactual {
  id: string;
  original_id: string;
  original_label: string;
  target_label: string;
  text: string;
  sentence: SentenceModel;
  included_phrase: string;
  pattern: string;
  matched_span: MatchSpan;
  edit_script: EditRun[];
  render_spans: RenderSpan[];
  status: "proposed" | "accepted" | "rejected" | "relabeled";
}

export interface LabelMetrics {
  tp: number;
  fp: number;
  fn: number;
  precision: number;
  recall: number;
  f1: number;
}

export interface MetricsReport {
  per_label: Record<string, LabelMetrics>;
  micro: LabelMetrics;
  kappa?: number | null;
  evaluated: boolean;
  notes: string[];
}

export interface RetrainEntry {
  revision: number;
  patterns: Record<string, string[]>;
  notes: string[];
  with_counterfactuals: MetricsReport;
  without_counterfactuals?: MetricsReport | null;
}
