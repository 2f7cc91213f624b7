// Display faithfulness: the screen shows the API's doubles, either at
// full precision (String round-trips shortest decimal form) or at the
// decision panel's pinned twelve percent decimals (toFixed renders the
// exact decimal value of the double). Both paths shift the decimal
// point on the string, so nothing recomputes the value.

import { describe, expect, it } from "vitest";

import {
  fixedPercentDisplay,
  fixedPercentString,
  percentDisplay,
  percentNumber,
  percentString,
  probabilityString,
  shiftDecimal,
} from "../src/display";

describe("full precision display", () => {
  it("shows the exact value the service serialized", () => {
    expect(probabilityString(0.053899608064)).toBe("0.053899608064");
    expect(probabilityString(0.824297048064)).toBe("0.824297048064");
    expect(probabilityString(0.11480128)).toBe("0.11480128");
    expect(probabilityString(0.88519872)).toBe("0.88519872");
    expect(probabilityString(0.025516596305919997)).toBe(
      "0.025516596305919997",
    );
  });

  it("shifts the decimal point for the percent view", () => {
    expect(percentString(0.053899608064)).toBe("5.3899608064");
    expect(percentDisplay(0.053899608064)).toBe("5.3899608064%");
    expect(percentString(0.88519872)).toBe("88.519872");
    expect(percentString(0.5)).toBe("50");
    expect(percentString(1)).toBe("100");
    expect(percentString(0)).toBe("0");
  });

  it("handles the scientific form String falls back to", () => {
    expect(percentString(1e-7)).toBe("0.00001");
    expect(percentString(1.25e-7)).toBe("0.0000125");
    expect(percentString(2e21)).toBe("2" + "0".repeat(23));
  });

  it("rejects non-finite input", () => {
    expect(() => probabilityString(Number.NaN)).toThrow();
    expect(() => probabilityString(Number.POSITIVE_INFINITY)).toThrow();
    expect(() => fixedPercentString(Number.NaN)).toThrow();
  });
});

describe("shiftDecimal", () => {
  it("moves the point through strings only", () => {
    expect(shiftDecimal("0.053899608064", 2)).toBe("5.3899608064");
    expect(shiftDecimal("1", 2)).toBe("100");
    expect(shiftDecimal("0.5", 2)).toBe("50");
    expect(shiftDecimal("12.34", -1)).toBe("1.234");
    expect(shiftDecimal("-0.25", 2)).toBe("-25");
    expect(shiftDecimal("3e-5", 2)).toBe("0.003");
  });
});

describe("decision panel precision", () => {
  // The service sums in tree order, so its doubles can sit one step
  // from the frozen study values; at twelve percent decimals the two
  // renderings agree exactly, which is what the panel compares.
  const pairs: [number, number, string][] = [
    [0.053899608064, 0.053899608064, "5.389960806400"],
    [0.025516596305919997, 0.02551659630592, "2.551659630592"],
    [0.8490259595059199, 0.84902595950592, "84.902595950592"],
    [0.08824531840000001, 0.0882453184, "8.824531840000"],
  ];

  it("renders service doubles and study values to the same string", () => {
    for (const [fromService, frozen, expected] of pairs) {
      expect(fixedPercentString(fromService)).toBe(expected);
      expect(fixedPercentString(frozen)).toBe(expected);
    }
  });

  it("appends the percent sign for the bars", () => {
    expect(fixedPercentDisplay(0.02551659630592)).toBe("2.551659630592%");
  });

  it("keeps a JSON round trip exact", () => {
    for (const [fromService] of pairs) {
      const again = JSON.parse(JSON.stringify(fromService)) as number;
      expect(probabilityString(again)).toBe(probabilityString(fromService));
    }
  });
});

describe("percentNumber for the threshold rule", () => {
  it("reads the displayed percent back as a number", () => {
    expect(percentNumber(0.053899608064)).toBe(5.3899608064);
    expect(percentNumber(0.025516596305919997)).toBeCloseTo(
      2.5516596305919997,
      12,
    );
  });
});
