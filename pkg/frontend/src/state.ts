/**
 * UI state machine for one annotator session.
 *
 * All interaction funnels through reduce(state, event), which enforces the
 * labeling scheme structurally: flag events are ignored unless base 4 is
 * selected, at most one subsumption direction can be active, leaving base 4
 * clears the flags, and swapping the displayed text order flips the
 * direction. Because of that, the composed label is valid by construction
 * whenever a base is selected, and submit stays disabled until then.
 */

import type { Claimed, Lint, Pair, Ticket } from "./api.js";
import {
  type Base,
  type Direction,
  type ParsedLabel,
  formatLabel,
  isValidLabel,
  swapLabel,
} from "./labels.js";
import {
  type SegmentView,
  editedHeading,
  isUnchanged,
  segmentHeading,
} from "./segments.js";

export type EditSide = 1 | 2;

export interface RewriteDraft {
  text1: string;
  text2: string;
}

export interface AnnotationState {
  pair: Pair | null;
  ticket: Ticket | null;
  lints: Lint[];
  /** Display order of the two texts; flipping it flips the direction. */
  swapped: boolean;
  base: Base | null;
  direction: Direction | null;
  style: boolean;
  minorDeviation: boolean;
  rewrites: RewriteDraft[];
  rewriteFormOpen: boolean;
  draft: RewriteDraft;
  note: string;
  /** Side being trimmed in segment edit mode, or null when off. */
  editSide: EditSide | null;
  segmentView: SegmentView | null;
  /** Directive received after an edit left the texts identical. */
  forcedSkip: boolean;
  /** Error codes from the last rejected service call, shown inline. */
  violations: string[];
  errorDetail: string | null;
}

export const INITIAL_STATE: AnnotationState = {
  pair: null,
  ticket: null,
  lints: [],
  swapped: false,
  base: null,
  direction: null,
  style: false,
  minorDeviation: false,
  rewrites: [],
  rewriteFormOpen: false,
  draft: { text1: "", text2: "" },
  note: "",
  editSide: null,
  segmentView: null,
  forcedSkip: false,
  violations: [],
  errorDetail: null,
};

export type UiEvent =
  | { kind: "candidate"; claimed: Claimed }
  | { kind: "queueDrained" }
  | { kind: "selectBase"; base: Base }
  | { kind: "toggleDirection"; direction: Direction }
  | { kind: "toggleStyle" }
  | { kind: "toggleMinor" }
  | { kind: "swapTexts" }
  | { kind: "openRewriteForm" }
  | { kind: "closeRewriteForm" }
  | { kind: "editDraft"; field: "text1" | "text2"; value: string }
  | { kind: "commitRewrite" }
  | { kind: "removeRewrite"; index: number }
  | { kind: "editNote"; value: string }
  | { kind: "enterEditMode"; side: EditSide }
  | { kind: "toggleSegment"; index: number }
  | { kind: "leaveEditMode" }
  | { kind: "pairEdited"; pair: Pair; directive: string | null; lints: Lint[] }
  | { kind: "serviceRejected"; code: string; detail: string; violations: string[] }
  | { kind: "clearError" };

export function reduce(state: AnnotationState, event: UiEvent): AnnotationState {
  switch (event.kind) {
    case "candidate":
      return {
        ...INITIAL_STATE,
        pair: event.claimed.pair,
        ticket: event.claimed.ticket,
        lints: event.claimed.lints,
      };

    case "queueDrained":
      return { ...INITIAL_STATE };

    case "selectBase": {
      if (state.pair === null || state.forcedSkip) {
        return state;
      }
      if (event.base === "4") {
        return { ...state, base: "4", violations: [], errorDetail: null };
      }
      // Leaving base 4 drops the flags so the composition stays valid.
      return {
        ...state,
        base: event.base,
        direction: null,
        style: false,
        minorDeviation: false,
        violations: [],
        errorDetail: null,
      };
    }

    case "toggleDirection": {
      if (!flagsEnabled(state)) {
        return state;
      }
      const direction = state.direction === event.direction ? null : event.direction;
      return { ...state, direction };
    }

    case "toggleStyle":
      if (!flagsEnabled(state)) {
        return state;
      }
      return { ...state, style: !state.style };

    case "toggleMinor":
      if (!flagsEnabled(state)) {
        return state;
      }
      return { ...state, minorDeviation: !state.minorDeviation };

    case "swapTexts": {
      if (state.pair === null) {
        return state;
      }
      const direction =
        state.direction === null ? null : state.direction === "<" ? ">" : "<";
      return { ...state, swapped: !state.swapped, direction };
    }

    case "openRewriteForm":
      if (state.pair === null) {
        return state;
      }
      return { ...state, rewriteFormOpen: true };

    case "closeRewriteForm":
      return { ...state, rewriteFormOpen: false };

    case "editDraft":
      return { ...state, draft: { ...state.draft, [event.field]: event.value } };

    case "commitRewrite": {
      const { text1, text2 } = state.draft;
      if (text1.trim() === "" || text2.trim() === "" || text1 === text2) {
        return state;
      }
      return {
        ...state,
        rewrites: [...state.rewrites, { text1, text2 }],
        draft: { text1: "", text2: "" },
      };
    }

    case "removeRewrite":
      return {
        ...state,
        rewrites: state.rewrites.filter((_, i) => i !== event.index),
      };

    case "editNote":
      return { ...state, note: event.value };

    case "enterEditMode": {
      // Only automatically extracted headings may be trimmed.
      if (state.pair === null || state.pair.source !== "AutoHeading") {
        return state;
      }
      const text = event.side === 1 ? state.pair.text1 : state.pair.text2;
      return {
        ...state,
        editSide: event.side,
        segmentView: segmentHeading(text),
      };
    }

    case "toggleSegment": {
      if (state.segmentView === null) {
        return state;
      }
      const kept = [...state.segmentView.kept];
      if (event.index < 0 || event.index >= kept.length) {
        return state;
      }
      kept[event.index] = !kept[event.index];
      return { ...state, segmentView: { ...state.segmentView, kept } };
    }

    case "leaveEditMode":
      return { ...state, editSide: null, segmentView: null };

    case "pairEdited": {
      const next: AnnotationState = {
        ...state,
        pair: event.pair,
        lints: event.lints,
        editSide: null,
        segmentView: null,
        violations: [],
        errorDetail: null,
      };
      if (event.directive === "AssignSkipAndRewrite") {
        // The edit made the texts identical: force a skip, open the
        // rewrite form so the pair can still contribute a variant.
        return {
          ...next,
          base: "x",
          direction: null,
          style: false,
          minorDeviation: false,
          forcedSkip: true,
          rewriteFormOpen: true,
        };
      }
      return next;
    }

    case "serviceRejected":
      return {
        ...state,
        violations:
          event.violations.length > 0 ? event.violations : [event.code],
        errorDetail: event.detail,
      };

    case "clearError":
      return { ...state, violations: [], errorDetail: null };
  }
}

/** Flag controls are live only while base 4 is selected. */
export function flagsEnabled(state: AnnotationState): boolean {
  return state.pair !== null && state.base === "4" && !state.forcedSkip;
}

/** The parsed form of the current selection, in display order (the
 *  direction toggle always refers to the texts as currently shown), or
 *  null before a base is picked. */
export function composedLabel(state: AnnotationState): ParsedLabel | null {
  if (state.base === null) {
    return null;
  }
  if (state.base !== "4") {
    return {
      base: state.base,
      direction: null,
      style: false,
      minorDeviation: false,
    };
  }
  return {
    base: "4",
    direction: state.direction,
    style: state.style,
    minorDeviation: state.minorDeviation,
  };
}

/** The canonical label string shown in the preview, in display order. */
export function composedLabelString(state: AnnotationState): string | null {
  const label = composedLabel(state);
  return label === null ? null : formatLabel(label);
}

/** The label string actually transmitted: the stored pair keeps its
 *  original text order, so a swapped display flips the direction back. */
export function submittedLabelString(state: AnnotationState): string | null {
  const label = composedLabel(state);
  if (label === null) {
    return null;
  }
  return formatLabel(state.swapped ? swapLabel(label) : label);
}

export function canSubmit(state: AnnotationState): boolean {
  if (state.pair === null || state.ticket === null) {
    return false;
  }
  const label = composedLabelString(state);
  return label !== null && isValidLabel(label);
}

/** Body for POST /annotations, or null while submit is disabled. */
export function submission(
  state: AnnotationState,
  annotator: string,
): {
  pair_id: string;
  annotator: string;
  label: string;
  rewrites: [string, string][];
  note?: string;
} | null {
  if (!canSubmit(state)) {
    return null;
  }
  const body = {
    pair_id: (state.pair as Pair).id,
    annotator,
    label: submittedLabelString(state) as string,
    rewrites: state.rewrites.map(
      (r) => [r.text1, r.text2] as [string, string],
    ),
  };
  return state.note.trim() === "" ? body : { ...body, note: state.note };
}

/** The trimmed heading the edit view would submit, or null when nothing
 *  is deletable (no change, or every segment dropped). */
export function editSubmission(
  state: AnnotationState,
): { side: EditSide; text: string } | null {
  if (state.editSide === null || state.segmentView === null) {
    return null;
  }
  if (isUnchanged(state.segmentView)) {
    return null;
  }
  const text = editedHeading(state.segmentView);
  if (text === null) {
    return null;
  }
  return { side: state.editSide, text };
}

/** The two texts in display order. */
export function displayedTexts(state: AnnotationState): [string, string] | null {
  if (state.pair === null) {
    return null;
  }
  const { text1, text2 } = state.pair;
  return state.swapped ? [text2, text1] : [text1, text2];
}
