// Number display. The invariant here is strict: the UI shows the
// numbers the API returned, never a recomputation of them. JSON parsing
// and String() round-trip doubles exactly, and the percent view is a
// decimal point shift performed on the string, so no arithmetic touches
// the values on their way to the screen.

export function probabilityString(p: number): string {
  if (!Number.isFinite(p)) {
    throw new Error(`not a probability: ${p}`);
  }
  return String(p);
}

export function percentString(p: number): string {
  return shiftDecimal(probabilityString(p), 2);
}

// "0.053899608064" shifted by 2 is "5.3899608064"; handles the
// scientific notation String() falls back to for tiny values.
export function shiftDecimal(text: string, places: number): string {
  let mantissa = text;
  let exponent = 0;
  const eAt = text.indexOf("e");
  if (eAt >= 0) {
    mantissa = text.slice(0, eAt);
    exponent = Number(text.slice(eAt + 1));
  }
  const negative = mantissa.startsWith("-");
  if (negative) {
    mantissa = mantissa.slice(1);
  }
  const dot = mantissa.indexOf(".");
  const digits = dot >= 0 ? mantissa.replace(".", "") : mantissa;
  let point = (dot >= 0 ? dot : mantissa.length) + exponent + places;

  let result: string;
  if (point <= 0) {
    result = "0." + "0".repeat(-point) + digits;
  } else if (point >= digits.length) {
    result = digits + "0".repeat(point - digits.length);
  } else {
    result = digits.slice(0, point) + "." + digits.slice(point);
  }
  result = result.replace(/^0+(?=\d)/, "");
  return negative ? "-" + result : result;
}

export function percentDisplay(p: number): string {
  return `${percentString(p)}%`;
}

// The decision panel pins its precision so values can be compared
// side by side: twelve percent decimals, obtained from toFixed (an
// exact decimal rendering of the double) plus the same string shift.
export function fixedPercentString(p: number, decimals = 12): string {
  if (!Number.isFinite(p)) {
    throw new Error(`not a probability: ${p}`);
  }
  return shiftDecimal(p.toFixed(decimals + 2), 2);
}

export function fixedPercentDisplay(p: number, decimals = 12): string {
  return `${fixedPercentString(p, decimals)}%`;
}

// For the threshold badge the percent string goes back through Number,
// which is exact for these short decimals; the comparison is decision
// logic, not analysis.
export function percentNumber(p: number): number {
  return Number(percentString(p));
}
