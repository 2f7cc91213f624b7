// Model editor state: rows of the entry form, conversion to and from
// model documents, and the inline checks that catch obvious slips
// before a round trip to the server. The server stays the authority;
// these checks only mirror the ones a analyst would trip over while
// typing.

import type { ModelDoc, ProbsDoc } from "./types";

export interface ComponentRow {
  id: string;
  states: string; // comma separated in the form
  failureRate: string; // empty means not given
}

export interface RowError {
  row: number;
  field: "id" | "states" | "failureRate";
  message: string;
}

export function emptyRow(): ComponentRow {
  return { id: "", states: "", failureRate: "" };
}

export function rowsFromModel(doc: ModelDoc): ComponentRow[] {
  return doc.components.map((component) => ({
    id: component.id,
    states: component.states.join(", "),
    failureRate:
      component.failure_rate === undefined
        ? ""
        : String(component.failure_rate),
  }));
}

export function parseStates(text: string): string[] {
  return text
    .split(",")
    .map((state) => state.trim())
    .filter((state) => state !== "");
}

export function checkRows(rows: ComponentRow[]): RowError[] {
  const errors: RowError[] = [];
  const seen = new Map<string, number>();
  rows.forEach((row, index) => {
    const id = row.id.trim();
    if (id === "") {
      errors.push({ row: index, field: "id", message: "component id is blank" });
    } else if (seen.has(id)) {
      errors.push({
        row: index,
        field: "id",
        message: `duplicate of row ${seen.get(id)! + 1}`,
      });
    } else {
      seen.set(id, index);
    }
    const states = parseStates(row.states);
    if (states.length === 0) {
      errors.push({
        row: index,
        field: "states",
        message: "needs at least one state",
      });
    } else if (new Set(states).size !== states.length) {
      errors.push({
        row: index,
        field: "states",
        message: "states repeat",
      });
    }
    if (row.failureRate.trim() !== "") {
      const rate = Number(row.failureRate);
      if (!Number.isFinite(rate) || rate < 0) {
        errors.push({
          row: index,
          field: "failureRate",
          message: "failure rate must be a non-negative number",
        });
      }
    }
  });
  return errors;
}

export function modelFromRows(name: string, rows: ComponentRow[]): ModelDoc {
  return {
    format: "etma-model/1",
    name: name.trim(),
    components: rows.map((row) => {
      const component: ModelDoc["components"][number] = {
        id: row.id.trim(),
        states: parseStates(row.states),
      };
      if (row.failureRate.trim() !== "") {
        component.failure_rate = Number(row.failureRate);
      }
      return component;
    }),
  };
}

// Pasting an existing model.json populates the form.
export function parsePastedModel(text: string): ModelDoc {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    throw new Error("not valid JSON");
  }
  if (
    typeof doc !== "object" ||
    doc === null ||
    (doc as { format?: unknown }).format !== "etma-model/1" ||
    !Array.isArray((doc as { components?: unknown }).components)
  ) {
    throw new Error("not a model document (format etma-model/1)");
  }
  return doc as ModelDoc;
}

export interface ProbRow {
  component: string;
  state: string;
  p: string;
}

export function probRowsForModel(doc: ModelDoc): ProbRow[] {
  return doc.components.flatMap((component) =>
    component.states.map((state) => ({
      component: component.id,
      state,
      p: "",
    })),
  );
}

export function probsFromRows(rows: ProbRow[]): ProbsDoc {
  return {
    format: "etma-probs/1",
    entries: rows.map((row) => ({
      component: row.component,
      state: row.state,
      p: Number(row.p),
    })),
  };
}

export function checkProbRows(rows: ProbRow[]): string[] {
  const problems: string[] = [];
  rows.forEach((row) => {
    const value = Number(row.p);
    if (row.p.trim() === "" || !Number.isFinite(value)) {
      problems.push(`${row.component}_${row.state}: not a number`);
    } else if (value < 0 || value > 1) {
      problems.push(`${row.component}_${row.state}: outside [0, 1]`);
    }
  });
  return problems;
}
