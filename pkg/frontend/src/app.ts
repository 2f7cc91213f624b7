// DOM wiring for the workbench page. All analysis numbers on screen
// come from API responses through the display helpers; this file only
// moves them around.

import { ApiError, Client } from "./api";
import {
  emptyHistory,
  recordStudy,
  thresholdBadge,
  barWidths,
  type DecisionHistory,
} from "./decision";
import {
  fixedPercentDisplay,
  percentDisplay,
  probabilityString,
} from "./display";
import {
  addProposal,
  edgeProposal,
  hoistProposal,
  nodeSkipProposal,
  toDocument,
  undoProposal,
  type Proposal,
} from "./directives";
import {
  checkProbRows,
  checkRows,
  emptyRow,
  modelFromRows,
  parsePastedModel,
  probRowsForModel,
  probsFromRows,
  rowsFromModel,
  type ComponentRow,
  type ProbRow,
} from "./editor";
import { formatIndexRanges } from "./ranges";
import { layoutTree } from "./treeview";
import {
  compactLabel,
  type EvaluateResponse,
  type ModelDoc,
  type PartitionDoc,
  type PathRow,
  type TreeDoc,
  type WhatifComparison,
} from "./types";

const client = new Client();

let rows: ComponentRow[] = [emptyRow()];
let session: string | null = null;
let treeDoc: TreeDoc | null = null;
let proposals: Proposal[] = [];
let pathRows: PathRow[] = [];
let checked = new Set<number>();
let probRows: ProbRow[] = [];
let probsDirty = false;
let hasTable = false;
let lastEval: EvaluateResponse | null = null;
let lastComparison: WhatifComparison | null = null;
let history: DecisionHistory = emptyHistory();
const sessionModels = new Map<string, ModelDoc | null>();
let exportUrl: string | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

const sessionLabel = el<HTMLSpanElement>("session-label");
const componentRowsBody = el<HTMLTableSectionElement>("component-rows");
const modelErrors = el<HTMLUListElement>("model-errors");
const generateButton = el<HTMLButtonElement>("generate-tree");
const pathCount = el<HTMLSpanElement>("path-count");
const treeHost = el<HTMLDivElement>("tree-host");
const proposalList = el<HTMLOListElement>("proposal-list");
const proposalError = el<HTMLParagraphElement>("proposal-error");
const undoButton = el<HTMLButtonElement>("undo-proposal");
const applyButton = el<HTMLButtonElement>("apply-proposals");
const exportDirectives = el<HTMLAnchorElement>("export-directives");
const pathRowsBody = el<HTMLTableSectionElement>("path-rows");
const pSelected = el<HTMLSpanElement>("p-selected");
const pSelectedPct = el<HTMLSpanElement>("p-selected-pct");
const pComplement = el<HTMLSpanElement>("p-complement");
const pComplementPct = el<HTMLSpanElement>("p-complement-pct");
const partitionError = el<HTMLParagraphElement>("partition-error");
const evalLabel = el<HTMLInputElement>("eval-label");
const recordButton = el<HTMLButtonElement>("record-eval");
const exportCsv = el<HTMLAnchorElement>("export-csv");
const probRowsBody = el<HTMLTableSectionElement>("prob-rows");
const probErrors = el<HTMLUListElement>("prob-errors");
const dupSelect = el<HTMLSelectElement>("dup-component");
const afterPartition = el<HTMLInputElement>("after-partition");
const thresholdInput = el<HTMLInputElement>("threshold");
const runStudyButton = el<HTMLButtonElement>("run-study");
const badge = el<HTMLSpanElement>("decision-badge");
const barBefore = el<HTMLDivElement>("bar-before");
const barAfter = el<HTMLDivElement>("bar-after");
const barBeforeValue = el<HTMLSpanElement>("bar-before-value");
const barAfterValue = el<HTMLSpanElement>("bar-after-value");
const studyHistory = el<HTMLUListElement>("study-history");

// ---------------------------------------------------------------- model

function renderRows(): void {
  componentRowsBody.textContent = "";
  rows.forEach((row, index) => {
    const tr = document.createElement("tr");
    tr.append(
      rowCell(row, index, "id", "e.g. CT"),
      rowCell(row, index, "states", "e.g. O, F"),
      rowCell(row, index, "failureRate", "optional"),
    );
    const actions = document.createElement("td");
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "quiet";
    remove.textContent = "×";
    remove.addEventListener("click", () => {
      rows = rows.filter((_, i) => i !== index);
      if (rows.length === 0) {
        rows = [emptyRow()];
      }
      renderRows();
    });
    actions.append(remove);
    tr.append(actions);
    componentRowsBody.append(tr);
  });
  markRowErrors();
}

function rowCell(
  row: ComponentRow,
  index: number,
  field: keyof ComponentRow,
  placeholder: string,
): HTMLTableCellElement {
  const td = document.createElement("td");
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = placeholder;
  input.value = row[field];
  input.dataset.row = String(index);
  input.dataset.field = field;
  input.addEventListener("input", () => {
    rows[index]![field] = input.value;
    markRowErrors();
  });
  td.append(input);
  return td;
}

function markRowErrors(): void {
  const errors = checkRows(rows);
  componentRowsBody.querySelectorAll("input").forEach((input) => {
    const at = Number(input.dataset.row);
    const field = input.dataset.field;
    input.classList.toggle(
      "bad",
      errors.some((e) => e.row === at && e.field === field),
    );
  });
  modelErrors.textContent = "";
  for (const error of errors) {
    const li = document.createElement("li");
    li.textContent = `row ${error.row + 1} ${error.field}: ${error.message}`;
    modelErrors.append(li);
  }
}

async function createSession(): Promise<void> {
  if (checkRows(rows).length > 0) {
    markRowErrors();
    return;
  }
  const doc = modelFromRows(el<HTMLInputElement>("model-name").value, rows);
  try {
    const created = await client.createSession(doc);
    sessionModels.set(created.id, doc);
    await switchSession(created.id);
  } catch (error) {
    showModelError(error);
  }
}

function showModelError(error: unknown): void {
  modelErrors.textContent = "";
  if (error instanceof ApiError && error.violations.length > 0) {
    for (const violation of error.violations) {
      const li = document.createElement("li");
      li.textContent = `${violation.severity}: ${violation.message}`;
      if (violation.severity === "warning") {
        li.className = "warning";
      }
      modelErrors.append(li);
    }
    return;
  }
  const li = document.createElement("li");
  li.textContent = error instanceof Error ? error.message : String(error);
  modelErrors.append(li);
}

function loadPasted(): void {
  const box = el<HTMLTextAreaElement>("paste-model");
  const note = el<HTMLParagraphElement>("paste-error");
  note.textContent = "";
  try {
    const doc = parsePastedModel(box.value);
    rows = rowsFromModel(doc);
    el<HTMLInputElement>("model-name").value = doc.name ?? "";
    renderRows();
  } catch (error) {
    note.textContent = error instanceof Error ? error.message : String(error);
  }
}

// ----------------------------------------------------------------- tree

const COL_WIDTH = 110;
const ROW_HEIGHT = 26;
const MARGIN_X = 50;
const MARGIN_Y = 24;
const NODE_RADIUS = 9;

const SVG_NS = "http://www.w3.org/2000/svg";

function renderTree(): void {
  treeHost.textContent = "";
  if (!treeDoc) {
    const note = document.createElement("p");
    note.id = "tree-disabled";
    note.className = "muted";
    note.textContent = "No tree yet. Create a session and generate one.";
    treeHost.append(note);
    return;
  }
  const doc = treeDoc;
  const layout = layoutTree(doc);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute(
    "width",
    String(layout.depthCount * COL_WIDTH + MARGIN_X * 2),
  );
  svg.setAttribute(
    "height",
    String(Math.max(layout.rowCount, 1) * ROW_HEIGHT + MARGIN_Y * 2),
  );

  const x = (depth: number) => MARGIN_X + depth * COL_WIDTH;
  const y = (row: number) => MARGIN_Y + row * ROW_HEIGHT + ROW_HEIGHT / 2;

  for (const edge of layout.edges) {
    const from = layout.nodes[edge.from]!;
    const to = layout.nodes[edge.to]!;
    const group = document.createElementNS(SVG_NS, "g");
    group.dataset.node = String(edge.from);
    group.dataset.state = edge.state;

    const line = document.createElementNS(SVG_NS, "path");
    const x1 = x(from.depth) + NODE_RADIUS;
    const y1 = y(from.row);
    const x2 = x(to.depth) - NODE_RADIUS;
    const y2 = y(to.row);
    line.setAttribute("d", `M ${x1} ${y1} L ${x1 + 14} ${y2} L ${x2} ${y2}`);
    line.setAttribute("class", "tree-edge");

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(x1 + 20));
    label.setAttribute("y", String(y2 - 4));
    label.setAttribute("class", "tree-edge-label");
    label.textContent = edge.state;

    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = "truncate after this event";
    group.append(title, line, label);
    group.addEventListener("click", () => onEdgeClick(edge.from, edge.state));
    svg.append(group);
  }

  for (const node of layout.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    group.dataset.node = String(node.index);
    if (node.kind === "terminal") {
      group.setAttribute("class", "tree-terminal");
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(x(node.depth) - 4));
      text.setAttribute("y", String(y(node.row) + 4));
      text.textContent = `#${node.pathIndex}`;
      group.append(text);
    } else {
      group.setAttribute("class", "tree-node");
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(x(node.depth)));
      circle.setAttribute("cy", String(y(node.row)));
      circle.setAttribute("r", String(NODE_RADIUS));
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(x(node.depth) - 8));
      text.setAttribute("y", String(y(node.row) - NODE_RADIUS - 3));
      text.textContent = node.label;
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = "splice this component out of its branch";
      group.append(title, circle, text);
      group.addEventListener("click", () => onNodeClick(node.index));
    }
    svg.append(group);
  }
  treeHost.append(svg);
}

function onEdgeClick(nodeIndex: number, state: string): void {
  if (!treeDoc) {
    return;
  }
  tryAddProposal(edgeProposal(treeDoc, nodeIndex, state));
}

function onNodeClick(nodeIndex: number): void {
  if (!treeDoc) {
    return;
  }
  const proposal = nodeSkipProposal(treeDoc, nodeIndex);
  if (!proposal) {
    proposalError.textContent =
      "the first component cannot be spliced out; there is no event before it";
    return;
  }
  tryAddProposal(proposal);
}

function tryAddProposal(proposal: Proposal): void {
  const result = addProposal(proposals, proposal);
  if (!result.added) {
    proposalError.textContent = result.reason ?? "cannot add this directive";
    return;
  }
  proposalError.textContent = "";
  proposals = result.list;
  renderProposals();
}

function proposalText(proposal: Proposal): string {
  const prefix = proposal.prefix.map(compactLabel).join(", ");
  return `[${prefix}] retain [${proposal.retain.join(", ")}]`;
}

function renderProposals(): void {
  proposalList.textContent = "";
  proposals.forEach((proposal, index) => {
    const li = document.createElement("li");
    li.textContent = proposalText(proposal);
    if (treeDoc) {
      const widened = hoistProposal(treeDoc, proposal);
      if (widened) {
        const widen = document.createElement("button");
        widen.type = "button";
        widen.className = "quiet";
        widen.textContent = "widen";
        widen.title = "cover every branch of the previous component";
        widen.addEventListener("click", () => {
          const others = proposals.filter((_, i) => i !== index);
          const result = addProposal(others, widened);
          if (!result.added) {
            proposalError.textContent = result.reason ?? "cannot widen";
            return;
          }
          proposalError.textContent = "";
          proposals = [
            ...proposals.slice(0, index),
            widened,
            ...proposals.slice(index + 1),
          ];
          renderProposals();
        });
        li.append(widen);
      }
    }
    proposalList.append(li);
  });
  undoButton.disabled = proposals.length === 0;
  applyButton.disabled = proposals.length === 0 || !session || !treeDoc;
  updateDirectivesExport();
}

function updateDirectivesExport(): void {
  if (exportUrl) {
    URL.revokeObjectURL(exportUrl);
    exportUrl = null;
  }
  if (proposals.length === 0) {
    exportDirectives.className = "disabled-link";
    exportDirectives.removeAttribute("href");
    return;
  }
  const blob = new Blob(
    [JSON.stringify(toDocument(proposals), null, 2) + "\n"],
    { type: "application/json" },
  );
  exportUrl = URL.createObjectURL(blob);
  exportDirectives.href = exportUrl;
  exportDirectives.download = "directives.json";
  exportDirectives.className = "live-link";
}

async function applyProposals(): Promise<void> {
  if (!session || proposals.length === 0) {
    return;
  }
  try {
    await client.reduce(session, toDocument(proposals));
    proposals = [];
    renderProposals();
    await loadTree();
  } catch (error) {
    proposalError.textContent =
      error instanceof Error ? error.message : String(error);
  }
}

async function loadTree(): Promise<void> {
  if (!session) {
    return;
  }
  const [doc, paths] = await Promise.all([
    client.tree(session),
    client.paths(session),
  ]);
  treeDoc = doc;
  pathRows = paths.paths;
  checked = new Set();
  lastEval = null;
  pathCount.textContent = `${pathRows.length} paths`;
  renderTree();
  renderPaths();
  renderProposals();
  renderEvaluation();
  updateDupSelect();
  exportCsv.href = client.histogramUrl(session);
  exportCsv.download = "histogram.csv";
  exportCsv.className = "live-link";
  runStudyButton.disabled = false;
}

// ------------------------------------------------------------ partition

function renderPaths(): void {
  pathRowsBody.textContent = "";
  pathRows.forEach((path) => {
    const tr = document.createElement("tr");
    const checkCell = document.createElement("td");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = checked.has(path.index);
    box.addEventListener("change", () => {
      if (box.checked) {
        checked.add(path.index);
      } else {
        checked.delete(path.index);
      }
      void liveEvaluate();
    });
    checkCell.append(box);
    const indexCell = document.createElement("td");
    indexCell.textContent = String(path.index);
    const eventsCell = document.createElement("td");
    eventsCell.textContent = path.events.map(compactLabel).join(" ");
    tr.append(checkCell, indexCell, eventsCell);
    pathRowsBody.append(tr);
  });
}

function currentPartition(): PartitionDoc | null {
  if (checked.size === 0) {
    return null;
  }
  return { mode: "indices", values: [formatIndexRanges(checked)] };
}

function probsReady(): boolean {
  return (
    probRows.length > 0 &&
    probRows.every((row) => row.p.trim() !== "") &&
    checkProbRows(probRows).length === 0
  );
}

async function liveEvaluate(label?: string): Promise<void> {
  partitionError.textContent = "";
  if (!session || !treeDoc) {
    return;
  }
  const partition = currentPartition();
  if (!partition) {
    lastEval = null;
    renderEvaluation();
    return;
  }
  if (!hasTable && !probsReady()) {
    partitionError.textContent =
      "enter the state probabilities below to evaluate";
    return;
  }
  const options: { probs?: ReturnType<typeof probsFromRows>; label?: string } =
    {};
  if (probsDirty && probsReady()) {
    options.probs = probsFromRows(probRows);
  }
  if (label) {
    options.label = label;
  }
  try {
    lastEval = await client.evaluate(session, partition, options);
    hasTable = true;
    probsDirty = false;
  } catch (error) {
    partitionError.textContent =
      error instanceof Error ? error.message : String(error);
    return;
  }
  renderEvaluation();
}

function renderEvaluation(): void {
  if (!lastEval) {
    pSelected.textContent = "–";
    pSelectedPct.textContent = "";
    pComplement.textContent = "–";
    pComplementPct.textContent = "";
    recordButton.disabled = true;
    return;
  }
  pSelected.textContent = probabilityString(lastEval.p_selected);
  pSelectedPct.textContent = `(${percentDisplay(lastEval.p_selected)})`;
  pComplement.textContent = probabilityString(lastEval.p_complement);
  pComplementPct.textContent = `(${percentDisplay(lastEval.p_complement)})`;
  recordButton.disabled = false;
}

function renderProbRows(): void {
  probRowsBody.textContent = "";
  probRows.forEach((row, index) => {
    const tr = document.createElement("tr");
    const name = document.createElement("td");
    name.textContent = `${row.component}_${row.state}`;
    const cell = document.createElement("td");
    const input = document.createElement("input");
    input.type = "text";
    input.value = row.p;
    input.addEventListener("input", () => {
      probRows[index]!.p = input.value;
      probsDirty = true;
      markProbErrors();
    });
    cell.append(input);
    tr.append(name, cell);
    probRowsBody.append(tr);
  });
  markProbErrors();
}

function markProbErrors(): void {
  probErrors.textContent = "";
  const started = probRows.filter((row) => row.p.trim() !== "");
  for (const problem of checkProbRows(started)) {
    const li = document.createElement("li");
    li.textContent = problem;
    probErrors.append(li);
  }
}

// ------------------------------------------------------------- decision

function treeComponents(doc: TreeDoc): string[] {
  const seen: string[] = [];
  for (const node of doc.nodes) {
    if (node.kind === "component" && !seen.includes(node.component)) {
      seen.push(node.component);
    }
  }
  return seen;
}

function updateDupSelect(): void {
  const model = session ? sessionModels.get(session) : null;
  const ids = model
    ? model.components.map((component) => component.id)
    : treeDoc
      ? treeComponents(treeDoc)
      : [];
  dupSelect.textContent = "";
  for (const id of ids) {
    const option = document.createElement("option");
    option.value = id;
    option.textContent = id;
    dupSelect.append(option);
  }
}

async function runStudy(): Promise<void> {
  if (!session || !treeDoc) {
    return;
  }
  const duplicate = dupSelect.value;
  if (!duplicate) {
    return;
  }
  const afterText = afterPartition.value.trim();
  const before = currentPartition();
  const comparisons: {
    label?: string;
    before: PartitionDoc;
    after: PartitionDoc;
  }[] = [];
  if (afterText && before) {
    comparisons.push({
      label: evalLabel.value.trim() || "selected partition",
      before,
      after: { mode: "indices", values: [afterText] },
    });
  }
  partitionError.textContent = "";
  try {
    const response = await client.whatif(session, duplicate, comparisons);
    const comparison = response.results[0] ?? null;
    lastComparison = comparison;
    history = recordStudy(history, {
      parentSession: session,
      newSession: response.id,
      duplicated: duplicate,
      comparison,
    });
    sessionModels.set(response.id, null);
    renderComparison();
    renderStudies();
    await switchSession(response.id);
  } catch (error) {
    partitionError.textContent =
      error instanceof Error ? error.message : String(error);
  }
}

function renderComparison(): void {
  const state = thresholdBadge(
    lastComparison ? lastComparison.after : null,
    thresholdInput.value,
  );
  badge.className = `badge ${state}`;
  badge.textContent =
    state === "accepted"
      ? "decision accepted"
      : state === "not-accepted"
        ? "not acceptable"
        : "–";
  if (!lastComparison) {
    barBefore.style.width = "0";
    barAfter.style.width = "0";
    barBeforeValue.textContent = "";
    barAfterValue.textContent = "";
    return;
  }
  const widths = barWidths(lastComparison.before, lastComparison.after);
  barBefore.style.width = `${widths.before}%`;
  barAfter.style.width = `${widths.after}%`;
  barBeforeValue.textContent = fixedPercentDisplay(lastComparison.before);
  barAfterValue.textContent = fixedPercentDisplay(lastComparison.after);
}

function shortId(id: string): string {
  return id.slice(0, 8);
}

function renderStudies(): void {
  studyHistory.textContent = "";
  for (const study of history.studies) {
    const li = document.createElement("li");
    const text = document.createElement("span");
    text.textContent = `${shortId(study.parentSession)} → ${shortId(
      study.newSession,
    )} duplicated ${study.duplicated}`;
    if (session === study.newSession) {
      text.className = "current";
    }
    li.append(text);
    for (const [name, target] of [
      ["open parent", study.parentSession],
      ["open", study.newSession],
    ] as const) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "quiet";
      button.textContent = name;
      button.disabled = session === target;
      button.addEventListener("click", () => {
        void switchSession(target).then(() => {
          if (study.comparison) {
            lastComparison = study.comparison;
            renderComparison();
          }
        });
      });
      li.append(button);
    }
    studyHistory.append(li);
  }
}

// -------------------------------------------------------------- session

async function switchSession(id: string): Promise<void> {
  session = id;
  sessionLabel.textContent = id;
  proposals = [];
  checked = new Set();
  lastEval = null;
  treeDoc = null;
  pathRows = [];
  pathCount.textContent = "";
  const summary = await client.summary(id);
  hasTable = summary.has_table;
  probsDirty = false;
  const model = sessionModels.get(id);
  probRows = model ? probRowsForModel(model) : [];
  renderProbRows();
  generateButton.disabled = false;
  if (summary.generated) {
    await loadTree();
  } else {
    renderTree();
    renderPaths();
    renderProposals();
    renderEvaluation();
    updateDupSelect();
    runStudyButton.disabled = true;
  }
  renderStudies();
}

async function generate(): Promise<void> {
  if (!session) {
    return;
  }
  proposals = [];
  await client.generate(session);
  await loadTree();
}

// ----------------------------------------------------------------- init

function init(): void {
  renderRows();
  renderTree();
  renderProposals();
  renderEvaluation();
  renderComparison();

  el<HTMLButtonElement>("add-row").addEventListener("click", () => {
    rows = [...rows, emptyRow()];
    renderRows();
  });
  el<HTMLButtonElement>("create-session").addEventListener("click", () => {
    void createSession();
  });
  el<HTMLButtonElement>("load-pasted").addEventListener("click", loadPasted);
  generateButton.addEventListener("click", () => {
    void generate();
  });
  undoButton.addEventListener("click", () => {
    proposals = undoProposal(proposals);
    proposalError.textContent = "";
    renderProposals();
  });
  applyButton.addEventListener("click", () => {
    void applyProposals();
  });
  recordButton.addEventListener("click", () => {
    void liveEvaluate(evalLabel.value.trim() || undefined);
  });
  runStudyButton.addEventListener("click", () => {
    void runStudy();
  });
  thresholdInput.addEventListener("input", renderComparison);
}

init();
