// Turning clicks on the tree into reduction directives.
//
// Clicking an edge proposes a truncation: keep the path up to that
// event, drop everything after it. Clicking a node proposes splicing
// that node's component out of its branch group; the proposal can then
// be widened one ancestor at a time while the surrounding structure is
// a uniform block, which is how a splice that should cover both sides
// of an earlier branching is built.

import type {
  DirectivesDoc,
  StateLabel,
  TreeDoc,
} from "./types";
import { compactLabel } from "./types";
import {
  eventsTo,
  parentLinks,
  subtreeComponentOrder,
  uniformChildChains,
} from "./treeview";

export interface Proposal {
  // node the prefix resolves to; kept so the proposal can be hoisted
  anchor: number;
  prefix: StateLabel[];
  retain: string[];
}

export function edgeProposal(
  doc: TreeDoc,
  nodeIndex: number,
  state: string,
): Proposal {
  const node = doc.nodes[nodeIndex];
  if (!node || node.kind !== "component") {
    throw new Error(`node ${nodeIndex} has no edges`);
  }
  const edge = node.edges.find((e) => e.state === state);
  if (!edge) {
    throw new Error(`node ${nodeIndex} has no ${state} edge`);
  }
  const prefix = [
    ...eventsTo(doc, nodeIndex),
    { component: node.component, state },
  ];
  return { anchor: edge.child, prefix, retain: [] };
}

// Splice the clicked node's component out, keeping the rest of its
// subtree chain. Returns null for the root: a directive needs at least
// one event to anchor on.
export function nodeSkipProposal(
  doc: TreeDoc,
  nodeIndex: number,
): Proposal | null {
  const node = doc.nodes[nodeIndex];
  if (!node || node.kind !== "component") {
    return null;
  }
  if (nodeIndex === doc.root) {
    return null;
  }
  const retain = subtreeComponentOrder(doc, nodeIndex).filter(
    (component) => component !== node.component,
  );
  return { anchor: nodeIndex, prefix: eventsTo(doc, nodeIndex), retain };
}

// Widen a proposal by one ancestor: the parent's component moves from
// the prefix into the retained chain, so the splice covers every branch
// of the parent. Only legal while the parent's children share one
// branching order (otherwise the widened directive would not describe
// a single block) and while a prefix event remains.
export function hoistProposal(doc: TreeDoc, proposal: Proposal): Proposal | null {
  if (proposal.prefix.length < 2) {
    return null;
  }
  const link = parentLinks(doc)[proposal.anchor];
  if (!link) {
    return null;
  }
  const parent = doc.nodes[link.parent]!;
  if (parent.kind !== "component" || !uniformChildChains(doc, link.parent)) {
    return null;
  }
  return {
    anchor: link.parent,
    prefix: proposal.prefix.slice(0, -1),
    retain: [parent.component, ...proposal.retain],
  };
}

function sameEvents(a: StateLabel[], b: StateLabel[]): boolean {
  return (
    a.length === b.length &&
    a.every(
      (event, i) =>
        event.component === b[i]!.component && event.state === b[i]!.state,
    )
  );
}

function isEventPrefix(shorter: StateLabel[], longer: StateLabel[]): boolean {
  return (
    shorter.length <= longer.length &&
    sameEvents(shorter, longer.slice(0, shorter.length))
  );
}

// Mirror of the engine's conflict rule: two directives clash when one
// prefix begins with the other.
export function conflictsWith(a: Proposal, b: Proposal): boolean {
  return isEventPrefix(a.prefix, b.prefix) || isEventPrefix(b.prefix, a.prefix);
}

export interface AddResult {
  list: Proposal[];
  added: boolean;
  reason?: string;
}

export function addProposal(list: Proposal[], proposal: Proposal): AddResult {
  const clash = list.find((existing) => conflictsWith(existing, proposal));
  if (clash) {
    return {
      list,
      added: false,
      reason: `conflicts with the directive at ${clash.prefix
        .map(compactLabel)
        .join(", ")}`,
    };
  }
  return { list: [...list, proposal], added: true };
}

export function undoProposal(list: Proposal[]): Proposal[] {
  return list.slice(0, -1);
}

export function toDocument(list: Proposal[]): DirectivesDoc {
  return {
    format: "etma-directives/1",
    directives: list.map((proposal) => ({
      prefix: proposal.prefix.map((event) => ({
        component: event.component,
        state: event.state,
      })),
      retain: [...proposal.retain],
    })),
  };
}
