/**
 * Keyboard-first control scheme.
 *
 * Grading row: 1 2 3 4 x pick the base, < > s i toggle flags (live only
 * on base 4). w swaps the displayed text order, r opens the rewrite form,
 * e / E open segment edit mode for the first / second text, Enter submits.
 * Inside edit mode the digit keys toggle segments instead, Enter applies
 * the trim and Escape backs out.
 */

import type { AnnotationState, UiEvent } from "./state.js";

export type KeyAction =
  | { kind: "dispatch"; event: UiEvent }
  | { kind: "submit" }
  | { kind: "applyEdit" }
  | null;

export function keyToAction(key: string, state: AnnotationState): KeyAction {
  if (state.editSide !== null) {
    if (key === "Escape") {
      return { kind: "dispatch", event: { kind: "leaveEditMode" } };
    }
    if (key === "Enter") {
      return { kind: "applyEdit" };
    }
    if (/^[1-9]$/.test(key)) {
      return {
        kind: "dispatch",
        event: { kind: "toggleSegment", index: Number(key) - 1 },
      };
    }
    return null;
  }

  switch (key) {
    case "1":
    case "2":
    case "3":
    case "4":
      return { kind: "dispatch", event: { kind: "selectBase", base: key } };
    case "x":
      return { kind: "dispatch", event: { kind: "selectBase", base: "x" } };
    case "<":
      return {
        kind: "dispatch",
        event: { kind: "toggleDirection", direction: "<" },
      };
    case ">":
      return {
        kind: "dispatch",
        event: { kind: "toggleDirection", direction: ">" },
      };
    case "s":
      return { kind: "dispatch", event: { kind: "toggleStyle" } };
    case "i":
      return { kind: "dispatch", event: { kind: "toggleMinor" } };
    case "w":
      return { kind: "dispatch", event: { kind: "swapTexts" } };
    case "r":
      return { kind: "dispatch", event: { kind: "openRewriteForm" } };
    case "e":
      return { kind: "dispatch", event: { kind: "enterEditMode", side: 1 } };
    case "E":
      return { kind: "dispatch", event: { kind: "enterEditMode", side: 2 } };
    case "Escape":
      return { kind: "dispatch", event: { kind: "closeRewriteForm" } };
    case "Enter":
      return { kind: "submit" };
    default:
      return null;
  }
}
