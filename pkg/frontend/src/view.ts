/**
 * DOM rendering for the annotation workbench. Pure function of the state:
 * render(state, handlers) returns a fresh tree, and every control routes
 * back through the dispatch handler, so the DOM can never hold state of
 * its own.
 */

import type { Base, Direction } from "./labels.js";
import {
  type AnnotationState,
  type UiEvent,
  canSubmit,
  composedLabelString,
  displayedTexts,
  editSubmission,
  flagsEnabled,
} from "./state.js";

export interface Handlers {
  dispatch: (event: UiEvent) => void;
  submit: () => void;
  applyEdit: () => void;
}

const BASE_HINTS: Record<Base, string> = {
  "4": "Full paraphrase: either text could stand in for the other in any sensible context.",
  "3": "Paraphrase here, but not everywhere; also the grade when each side is more specific in a different aspect.",
  "2": "The texts are related but say different things.",
  "1": "No reasonable connection; usually an extraction mistake.",
  x: "Skip sparingly: wrong language, unintelligible, or identical texts.",
};

const FLAG_HINTS: Record<string, string> = {
  "<": "Arrow points at the more general text (shown first).",
  ">": "Arrow points at the more general text (shown second).",
  s: "Same meaning, different register, tone, or politeness.",
  i: "Small traceable shift: this/that, tense, person, number.",
};

const TIE_BREAK_HINT = "When two grades both feel right, pick the higher one.";

export function render(state: AnnotationState, handlers: Handlers): HTMLElement {
  const root = el("div", { class: "workbench" });

  if (state.pair === null) {
    root.append(
      el("p", { class: "empty-queue" }, "No candidate claimed. Queue may be drained."),
    );
    return root;
  }

  root.append(renderLints(state));
  root.append(renderTexts(state, handlers));
  if (state.editSide !== null) {
    root.append(renderEditMode(state, handlers));
    return root;
  }
  root.append(renderLabelControls(state, handlers));
  root.append(renderRewrites(state, handlers));
  root.append(renderNote(state, handlers));
  root.append(renderErrors(state));
  root.append(renderSubmit(state, handlers));
  return root;
}

function renderLints(state: AnnotationState): HTMLElement {
  const box = el("div", { class: "lints" });
  for (const lint of state.lints) {
    const banner = el("div", { class: "lint-banner", "data-lint": lint.code });
    let text = `${lint.code}: ${lint.detail}`;
    if (lint.code === "IdenticalPair") {
      text += " — consider assigning x.";
    }
    banner.textContent = text;
    box.append(banner);
  }
  return box;
}

function renderTexts(state: AnnotationState, handlers: Handlers): HTMLElement {
  const [first, second] = displayedTexts(state) as [string, string];
  const pair = state.pair;
  const box = el("div", { class: "texts" });
  box.append(
    el("blockquote", { class: "text text-first" }, first),
    el("blockquote", { class: "text text-second" }, second),
  );

  const controls = el("div", { class: "text-controls" });
  controls.append(
    button("swap", "Swap texts (w)", () => handlers.dispatch({ kind: "swapTexts" })),
  );
  if (pair !== null && pair.source === "AutoHeading") {
    // Only auto-extracted headings may be trimmed, and only by whole
    // segments; manual extractions never show these controls.
    controls.append(
      button("edit-text1", "Trim first text (e)", () =>
        handlers.dispatch({ kind: "enterEditMode", side: 1 }),
      ),
      button("edit-text2", "Trim second text (E)", () =>
        handlers.dispatch({ kind: "enterEditMode", side: 2 }),
      ),
    );
  }
  box.append(controls);
  return box;
}

function renderLabelControls(
  state: AnnotationState,
  handlers: Handlers,
): HTMLElement {
  const box = el("div", { class: "label-controls" });

  const bases = el("div", { class: "bases", role: "radiogroup" });
  for (const base of ["1", "2", "3", "4", "x"] as Base[]) {
    const b = button(`base-${base}`, base, () =>
      handlers.dispatch({ kind: "selectBase", base }),
    );
    b.setAttribute("aria-pressed", String(state.base === base));
    b.title = BASE_HINTS[base];
    if (state.forcedSkip) {
      b.disabled = true;
    }
    bases.append(b);
  }
  box.append(bases);

  const flags = el("div", { class: "flags" });
  const enabled = flagsEnabled(state);
  for (const direction of ["<", ">"] as Direction[]) {
    const b = button(`flag-${direction === "<" ? "lt" : "gt"}`, direction, () =>
      handlers.dispatch({ kind: "toggleDirection", direction }),
    );
    b.disabled = !enabled;
    b.setAttribute("aria-pressed", String(state.direction === direction));
    b.title = FLAG_HINTS[direction] as string;
    flags.append(b);
  }
  const styleButton = button("flag-s", "s", () =>
    handlers.dispatch({ kind: "toggleStyle" }),
  );
  styleButton.disabled = !enabled;
  styleButton.setAttribute("aria-pressed", String(state.style));
  styleButton.title = FLAG_HINTS["s"] as string;
  const minorButton = button("flag-i", "i", () =>
    handlers.dispatch({ kind: "toggleMinor" }),
  );
  minorButton.disabled = !enabled;
  minorButton.setAttribute("aria-pressed", String(state.minorDeviation));
  minorButton.title = FLAG_HINTS["i"] as string;
  flags.append(styleButton, minorButton);
  box.append(flags);

  const preview = el("output", { class: "label-preview" });
  preview.textContent = composedLabelString(state) ?? "—";
  box.append(preview);
  box.append(el("p", { class: "hint" }, TIE_BREAK_HINT));
  return box;
}

function renderRewrites(state: AnnotationState, handlers: Handlers): HTMLElement {
  const box = el("div", { class: "rewrites" });
  const list = el("ul", { class: "rewrite-list" });
  state.rewrites.forEach((rewrite, index) => {
    const item = el("li", {}, `${rewrite.text1} ⇔ ${rewrite.text2} `);
    item.append(
      button(`remove-rewrite-${index}`, "remove", () =>
        handlers.dispatch({ kind: "removeRewrite", index }),
      ),
    );
    list.append(item);
  });
  box.append(list);

  if (!state.rewriteFormOpen) {
    box.append(
      button("open-rewrite", "Add rewrite (r)", () =>
        handlers.dispatch({ kind: "openRewriteForm" }),
      ),
    );
    return box;
  }

  const form = el("div", { class: "rewrite-form" });
  const first = textarea("rewrite-text1", state.draft.text1, (value) =>
    handlers.dispatch({ kind: "editDraft", field: "text1", value }),
  );
  const second = textarea("rewrite-text2", state.draft.text2, (value) =>
    handlers.dispatch({ kind: "editDraft", field: "text2", value }),
  );
  const commit = button("commit-rewrite", "Keep rewrite", () =>
    handlers.dispatch({ kind: "commitRewrite" }),
  );
  const { text1, text2 } = state.draft;
  commit.disabled = text1.trim() === "" || text2.trim() === "" || text1 === text2;
  form.append(first, second, commit);
  if (state.forcedSkip) {
    form.append(
      el(
        "p",
        { class: "hint" },
        "The edit made the texts identical, so this pair is skipped; a rewrite keeps it useful.",
      ),
    );
  }
  box.append(form);
  return box;
}

function renderNote(state: AnnotationState, handlers: Handlers): HTMLElement {
  const box = el("div", { class: "note" });
  box.append(
    textarea("note", state.note, (value) =>
      handlers.dispatch({ kind: "editNote", value }),
    ),
  );
  return box;
}

function renderErrors(state: AnnotationState): HTMLElement {
  const box = el("div", { class: "errors" });
  if (state.violations.length > 0) {
    const list = el("ul", { class: "violations" });
    for (const code of state.violations) {
      list.append(el("li", { "data-violation": code }, code));
    }
    box.append(list);
  }
  if (state.errorDetail !== null) {
    box.append(el("p", { class: "error-detail" }, state.errorDetail));
  }
  return box;
}

function renderSubmit(state: AnnotationState, handlers: Handlers): HTMLElement {
  const box = el("div", { class: "actions" });
  const submit = button("submit", "Submit (Enter)", handlers.submit);
  submit.disabled = !canSubmit(state);
  box.append(submit);
  return box;
}

function renderEditMode(state: AnnotationState, handlers: Handlers): HTMLElement {
  const view = state.segmentView;
  const box = el("div", { class: "edit-mode" });
  if (view === null) {
    return box;
  }
  box.append(
    el(
      "p",
      { class: "hint" },
      "Delete whole segments only; drop a part if the rest stands on its own.",
    ),
  );
  const list = el("ol", { class: "segments" });
  view.segments.forEach((segment, index) => {
    const item = el("li", {});
    const toggle = document.createElement("input");
    toggle.type = "checkbox";
    toggle.id = `segment-${index}`;
    toggle.checked = view.kept[index] as boolean;
    toggle.addEventListener("change", () =>
      handlers.dispatch({ kind: "toggleSegment", index }),
    );
    const label = el("label", { for: `segment-${index}` }, segment);
    item.append(toggle, label);
    list.append(item);
  });
  box.append(list);

  const apply = button("apply-edit", "Apply trim (Enter)", handlers.applyEdit);
  apply.disabled = editSubmission(state) === null;
  const cancel = button("cancel-edit", "Cancel (Esc)", () =>
    handlers.dispatch({ kind: "leaveEditMode" }),
  );
  box.append(apply, cancel);
  return box;
}

function el(
  tag: string,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function button(id: string, text: string, onClick: () => void): HTMLButtonElement {
  const node = document.createElement("button");
  node.id = id;
  node.type = "button";
  node.textContent = text;
  node.addEventListener("click", onClick);
  return node;
}

function textarea(
  id: string,
  value: string,
  onInput: (value: string) => void,
): HTMLTextAreaElement {
  const node = document.createElement("textarea");
  node.id = id;
  node.value = value;
  node.addEventListener("input", () => onInput(node.value));
  return node;
}
