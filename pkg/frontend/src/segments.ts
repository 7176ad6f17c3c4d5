/**
 * Client-side mirror of heading segmentation, used by the edit mode.
 *
 * Auto-extracted headings may only be edited by deleting whole segments;
 * the segment view shows each part with a keep/drop toggle and this module
 * recombines the kept parts exactly the way the server will accept.
 */

/** Split points between independent heading parts, matched longest-first.
 *  The dashes and the pipe require surrounding spaces so hyphenated
 *  compounds never split. */
export const DELIMITERS = [" – ", " — ", " - ", " | ", "; ", ": "] as const;

export interface SegmentView {
  segments: string[];
  delimiters: string[];
  kept: boolean[];
}

export function segmentHeading(
  text: string,
  delimiters: readonly string[] = DELIMITERS,
): SegmentView {
  if (text.trim() === "") {
    throw new Error("heading must be non-empty");
  }
  const ordered = [...delimiters].sort((a, b) => b.length - a.length);
  const segments: string[] = [];
  const delims: string[] = [];
  let segStart = 0;
  let i = 0;
  while (i < text.length) {
    const matched = ordered.find((d) => text.startsWith(d, i));
    if (matched !== undefined && text.slice(segStart, i).trim() !== "") {
      segments.push(text.slice(segStart, i));
      delims.push(matched);
      i += matched.length;
      segStart = i;
    } else {
      i += 1;
    }
  }
  const tail = text.slice(segStart);
  if (tail.trim() !== "") {
    segments.push(tail);
  } else if (delims.length > 0) {
    segments[segments.length - 1] += delims.pop() + tail;
  } else {
    segments.push(text);
  }
  return { segments, delimiters: delims, kept: segments.map(() => true) };
}

/**
 * The edited heading the current keep/drop choices produce.
 *
 * Between two kept segments the glue is the delimiter directly before the
 * later one, which is always one of the delimiters the server accepts for
 * that join. Returns null when every segment is dropped (not submittable)
 * and the unchanged text when nothing is dropped.
 */
export function editedHeading(view: SegmentView): string | null {
  const keptIndexes = view.kept
    .map((keep, index) => (keep ? index : -1))
    .filter((index) => index >= 0);
  if (keptIndexes.length === 0) {
    return null;
  }
  let out = view.segments[keptIndexes[0] as number] as string;
  for (let k = 1; k < keptIndexes.length; k += 1) {
    const index = keptIndexes[k] as number;
    out += (view.delimiters[index - 1] as string) + view.segments[index];
  }
  return out;
}

export function isUnchanged(view: SegmentView): boolean {
  return view.kept.every(Boolean);
}
