import { describe, expect, it } from "vitest";

import { formatIndexRanges, parseIndexValues } from "../src/ranges";

describe("formatIndexRanges", () => {
  it("collapses runs of three or more", () => {
    expect(formatIndexRanges([3, 5, 7, 8, 9, 10])).toBe("3,5,7-10");
    expect(formatIndexRanges([0, 1, 2, 4, 6])).toBe("0-2,4,6");
  });

  it("keeps pairs as two entries", () => {
    expect(formatIndexRanges([4, 5])).toBe("4,5");
    expect(formatIndexRanges([9])).toBe("9");
    expect(formatIndexRanges([])).toBe("");
  });

  it("sorts its input first", () => {
    expect(formatIndexRanges([10, 3, 8, 5, 9, 7])).toBe("3,5,7-10");
  });
});

describe("parseIndexValues", () => {
  it("reads range strings and plain numbers", () => {
    expect(parseIndexValues(["3,5,7-10"])).toEqual([3, 5, 7, 8, 9, 10]);
    expect(parseIndexValues([0, 10, 20])).toEqual([0, 10, 20]);
    expect(parseIndexValues(["0-2", 4, "6"])).toEqual([0, 1, 2, 4, 6]);
  });

  it("deduplicates and sorts", () => {
    expect(parseIndexValues(["5,3,3-5"])).toEqual([3, 4, 5]);
  });

  it("rejects junk", () => {
    expect(() => parseIndexValues(["x"])).toThrow();
    expect(() => parseIndexValues(["-3"])).toThrow();
    expect(() => parseIndexValues(["5-3"])).toThrow();
    expect(() => parseIndexValues([1.5])).toThrow();
  });

  it("round-trips through formatIndexRanges", () => {
    const cases = [
      [3, 5, 7, 8, 9, 10],
      [0],
      [0, 2, 4, 6, 8],
      [...Array(31).keys()],
      [2, 3, 5, 6, 7, 8, 9, 12, 13, 15, 16, 17, 18, 19, 22, 23],
    ];
    for (const indices of cases) {
      expect(parseIndexValues([formatIndexRanges(indices)])).toEqual(indices);
    }
  });
});
