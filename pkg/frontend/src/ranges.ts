// Path index sets travel as the same "3,5,7-10" strings the CLI and the
// partition documents use, so selections survive a copy-paste in either
// direction.

export function formatIndexRanges(indices: Iterable<number>): string {
  const sorted = [...indices].sort((a, b) => a - b);
  const parts: string[] = [];
  let i = 0;
  while (i < sorted.length) {
    let j = i;
    while (j + 1 < sorted.length && sorted[j + 1] === sorted[j]! + 1) {
      j += 1;
    }
    if (j - i >= 2) {
      parts.push(`${sorted[i]}-${sorted[j]}`);
    } else {
      for (let k = i; k <= j; k += 1) {
        parts.push(String(sorted[k]));
      }
    }
    i = j + 1;
  }
  return parts.join(",");
}

export function parseIndexValues(values: (string | number)[]): number[] {
  const out = new Set<number>();
  for (const value of values) {
    if (typeof value === "number") {
      addIndex(out, value);
      continue;
    }
    for (const token of value.split(",")) {
      const text = token.trim();
      if (text === "") {
        continue;
      }
      const dash = text.indexOf("-", 1);
      if (dash > 0) {
        const low = parseIndexNumber(text.slice(0, dash));
        const high = parseIndexNumber(text.slice(dash + 1));
        if (high < low) {
          throw new Error(`empty range ${text}`);
        }
        for (let k = low; k <= high; k += 1) {
          out.add(k);
        }
      } else {
        addIndex(out, parseIndexNumber(text));
      }
    }
  }
  return [...out].sort((a, b) => a - b);
}

function parseIndexNumber(text: string): number {
  const value = Number(text.trim());
  if (!Number.isInteger(value)) {
    throw new Error(`not a path index: ${text}`);
  }
  return checkIndex(value);
}

function addIndex(out: Set<number>, value: number): void {
  if (!Number.isInteger(value)) {
    throw new Error(`not a path index: ${value}`);
  }
  out.add(checkIndex(value));
}

function checkIndex(value: number): number {
  if (value < 0) {
    throw new Error(`negative path index: ${value}`);
  }
  return value;
}
