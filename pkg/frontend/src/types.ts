// Document and API shapes shared across the UI. These mirror the JSON
// the service reads and writes; the UI never invents fields of its own.

export interface StateLabel {
  component: string;
  state: string;
}

export interface ModelComponent {
  id: string;
  states: string[];
  failure_rate?: number;
}

export interface ModelDoc {
  format: "etma-model/1";
  name: string;
  components: ModelComponent[];
}

export interface TreeEdge {
  state: string;
  child: number;
}

export type TreeNode =
  | { kind: "terminal" }
  | { kind: "component"; component: string; edges: TreeEdge[] };

export interface TreeDoc {
  format: "etma-tree/1";
  model: { name: string; hash: string };
  root: number;
  nodes: TreeNode[];
}

export interface DirectiveDoc {
  prefix: StateLabel[];
  retain: string[];
}

export interface DirectivesDoc {
  format: "etma-directives/1";
  directives: DirectiveDoc[];
}

export type PartitionMode = "indices" | "contains_all" | "contains_any";

export interface PartitionDoc {
  mode: PartitionMode;
  values: (string | number)[];
}

export interface ProbEntry {
  component: string;
  state: string;
  p: number;
}

export interface ProbsDoc {
  format: "etma-probs/1";
  tolerance?: number;
  entries: ProbEntry[];
}

export interface Violation {
  severity: "error" | "warning";
  code: string;
  message: string;
  component: string | null;
  state: string | null;
}

export interface CreateResponse {
  id: string;
}

export interface TreeSummaryResponse {
  path_count: number;
  dot_url: string;
  paths_url: string;
}

export interface EvaluateResponse {
  p_selected: number;
  p_complement: number;
  selected_indices: number[];
}

export interface WhatifComparison {
  label: string;
  before: number;
  after: number;
  delta: number;
}

export interface WhatifResponse {
  id: string;
  path_count: number;
  results: WhatifComparison[];
}

export interface PathRow {
  index: number;
  events: StateLabel[];
}

export interface PathsResponse {
  paths: PathRow[];
}

export interface SessionSummary {
  id: string;
  model_name: string | null;
  generated: boolean;
  directive_sets: number;
  path_count: number | null;
  has_table: boolean;
  evaluations: { label: string; p_selected: number }[];
  history: { action: string; at: number }[];
}

export function compactLabel(label: StateLabel): string {
  return `${label.component}_${label.state}`;
}

export function labelFromCompact(text: string): StateLabel {
  const split = text.lastIndexOf("_");
  if (split <= 0 || split === text.length - 1) {
    throw new Error(`not a component_state label: ${text}`);
  }
  return { component: text.slice(0, split), state: text.slice(split + 1) };
}
