/**
 * Client-side mirror of the label grammar.
 *
 * A label is a base grade (1, 2, 3, 4, or x for skip) and, on base 4 only,
 * up to three flags: one subsumption direction (< or >), a style marker s,
 * and a minor-deviation marker i. Canonical spelling is base, direction,
 * s, i. The server is the authority; this mirror exists so the UI can
 * refuse to compose anything the server would reject.
 */

export type Base = "1" | "2" | "3" | "4" | "x";
export type Direction = "<" | ">";

export interface ParsedLabel {
  base: Base;
  direction: Direction | null;
  style: boolean;
  minorDeviation: boolean;
}

/** Every valid label, in canonical display order. */
export const ALL_LABELS = [
  "1", "2", "3",
  "4", "4i", "4s", "4si",
  "4<", "4<i", "4<s", "4<si",
  "4>", "4>i", "4>s", "4>si",
  "x",
] as const;

export type LabelString = (typeof ALL_LABELS)[number];

export type LabelErrorCode =
  | "EmptyLabel"
  | "UnknownSymbol"
  | "DuplicateFlag"
  | "BothDirections"
  | "FlagOnNonUniversal";

export class LabelParseError extends Error {
  code: LabelErrorCode;
  /** Every violated constraint, not just the headline one. */
  violations: string[];

  constructor(code: LabelErrorCode, message: string, violations?: string[]) {
    super(message);
    this.name = "LabelParseError";
    this.code = code;
    this.violations = violations ?? [code];
  }
}

const BASES: Record<string, Base> = {
  "1": "1", "2": "2", "3": "3", "4": "4", x: "x", X: "x",
};

/**
 * Parse a label string such as "4", "4>s" or "x". Surrounding whitespace
 * and letter case are forgiven; flag order is free but each flag appears
 * at most once and only after base 4.
 */
export function parseLabel(text: string): ParsedLabel {
  const stripped = text.trim();
  if (stripped === "") {
    throw new LabelParseError("EmptyLabel", "label string is empty");
  }
  const base = BASES[stripped[0] as string];
  if (base === undefined) {
    throw new LabelParseError(
      "UnknownSymbol",
      `unknown base symbol '${stripped[0]}' in '${stripped}'`,
    );
  }

  let direction: Direction | null = null;
  let style = false;
  let minorDeviation = false;
  for (const ch of stripped.slice(1)) {
    const norm = ch.toLowerCase();
    if (norm !== "<" && norm !== ">" && norm !== "s" && norm !== "i") {
      throw new LabelParseError(
        "UnknownSymbol",
        `unknown symbol '${ch}' in '${stripped}'`,
      );
    }
    if (base !== "4") {
      const violations = ["FlagOnNonUniversal"];
      if (base === "x") {
        violations.push("FlagsOnSkip");
      }
      throw new LabelParseError(
        "FlagOnNonUniversal",
        `flag '${ch}' after base '${base}' in '${stripped}'`,
        violations,
      );
    }
    if (norm === "<" || norm === ">") {
      if (direction === norm) {
        throw new LabelParseError(
          "DuplicateFlag",
          `duplicate flag '${ch}' in '${stripped}'`,
        );
      }
      if (direction !== null) {
        throw new LabelParseError(
          "BothDirections",
          `both '<' and '>' present in '${stripped}'`,
        );
      }
      direction = norm;
    } else if (norm === "s") {
      if (style) {
        throw new LabelParseError(
          "DuplicateFlag",
          `duplicate flag '${ch}' in '${stripped}'`,
        );
      }
      style = true;
    } else {
      if (minorDeviation) {
        throw new LabelParseError(
          "DuplicateFlag",
          `duplicate flag '${ch}' in '${stripped}'`,
        );
      }
      minorDeviation = true;
    }
  }
  return { base, direction, style, minorDeviation };
}

/** Canonical spelling: base, then direction, then s, then i. */
export function formatLabel(label: ParsedLabel): string {
  let out: string = label.base;
  if (label.direction !== null) {
    out += label.direction;
  }
  if (label.style) {
    out += "s";
  }
  if (label.minorDeviation) {
    out += "i";
  }
  return out;
}

export function isValidLabel(text: string): boolean {
  try {
    parseLabel(text);
    return true;
  } catch {
    return false;
  }
}

/**
 * The label for the same pair with its two texts exchanged: the
 * subsumption arrow flips, everything else is untouched.
 */
export function swapLabel(label: ParsedLabel): ParsedLabel {
  if (label.direction === null) {
    return label;
  }
  return { ...label, direction: label.direction === "<" ? ">" : "<" };
}
