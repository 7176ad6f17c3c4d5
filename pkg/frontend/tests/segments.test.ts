import { describe, expect, it } from "vitest";

import { editedHeading, isUnchanged, segmentHeading } from "../src/segments";

const HEADING =
  "Irakin levottomuudet jatkuvat – AFP: Shiiajohtajan kotia pommitettiin lennokista";

describe("segmentHeading", () => {
  it("splits on spaced dashes, pipes, colons, and semicolons", () => {
    const view = segmentHeading(HEADING);
    expect(view.segments).toEqual([
      "Irakin levottomuudet jatkuvat",
      "AFP",
      "Shiiajohtajan kotia pommitettiin lennokista",
    ]);
    expect(view.delimiters).toEqual([" – ", ": "]);
    expect(view.kept).toEqual([true, true, true]);
  });

  it("keeps hyphenated compounds intact", () => {
    const view = segmentHeading("4-vuotias voitti: yleisö hurrasi");
    expect(view.segments).toEqual(["4-vuotias voitti", "yleisö hurrasi"]);
  });

  it("treats a heading without delimiters as one segment", () => {
    const view = segmentHeading("Ei jakajia täällä");
    expect(view.segments).toEqual(["Ei jakajia täällä"]);
    expect(view.delimiters).toEqual([]);
  });

  it("never creates blank segments from doubled or trailing delimiters", () => {
    const view = segmentHeading("alku: : loppu: ");
    for (const segment of view.segments) {
      expect(segment.trim()).not.toBe("");
    }
  });

  it("rejoins to the exact input", () => {
    for (const text of [
      HEADING,
      "yksi: kaksi; kolme | neljä - viisi",
      "reuna : tapaus:ilman välejä",
      "a: b",
    ]) {
      const view = segmentHeading(text);
      let rejoined = view.segments[0] as string;
      view.delimiters.forEach((delim, i) => {
        rejoined += delim + view.segments[i + 1];
      });
      expect(rejoined).toBe(text);
    }
  });
});

describe("editedHeading", () => {
  it("drops a middle segment and glues with the delimiter before the next kept one", () => {
    const view = segmentHeading(HEADING);
    view.kept[1] = false;
    expect(editedHeading(view)).toBe(
      "Irakin levottomuudet jatkuvat: Shiiajohtajan kotia pommitettiin lennokista",
    );
  });

  it("drops leading and trailing segments cleanly", () => {
    const view = segmentHeading("yksi: kaksi; kolme");
    view.kept[0] = false;
    expect(editedHeading(view)).toBe("kaksi; kolme");
    view.kept[0] = true;
    view.kept[2] = false;
    expect(editedHeading(view)).toBe("yksi: kaksi");
  });

  it("returns null when every segment is dropped", () => {
    const view = segmentHeading("yksi: kaksi");
    view.kept[0] = false;
    view.kept[1] = false;
    expect(editedHeading(view)).toBeNull();
  });

  it("returns the original when nothing is dropped", () => {
    const view = segmentHeading(HEADING);
    expect(isUnchanged(view)).toBe(true);
    expect(editedHeading(view)).toBe(HEADING);
  });
});
