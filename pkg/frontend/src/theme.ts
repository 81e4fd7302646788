/**
 * All counterfactual styling lives here so the gray/black/theme semantics
 * stay in one place: unchanged words render muted gray, inserted words
 * render emphatic near-black, and the rule-matched span is washed with the
 * original label's theme color behind the text.
 */

export const KEPT_COLOR = "#8a8a8a";
export const CHANGED_COLOR = "#111111";

/** Inline style for a base (gray/black) segment. */
export function baseStyle(style: "kept_gray" | "changed_black"): string {
  if (style === "kept_gray") {
    return `color:${KEPT_COLOR}`;
  }
  return `color:${CHANGED_COLOR};font-weight:600`;
}

/** Translucent wash of the theme color for rule-matched tokens. */
export function ruleWash(hex: string): string {
  return `background-color:${hex}2e;box-shadow:0 1px 0 ${hex}`;
}

export function chipStyle(hex: string): string {
  return `background-color:${hex}22;border:1px solid ${hex};color:${hex}`;
}
