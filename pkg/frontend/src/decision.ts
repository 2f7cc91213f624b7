// Decision loop bookkeeping. Every redundancy study forks a fresh
// session on the server, so the client keeps a small history tree of
// session ids and the comparison each fork produced. Nothing here
// recomputes a probability; the badge compares the displayed percent
// against the analyst's threshold, which is a decision rule rather
// than an analysis result.

import type { WhatifComparison } from "./types";
import { percentNumber } from "./display";

export interface StudyRecord {
  parentSession: string;
  newSession: string;
  duplicated: string;
  // null when the study only forked the session, without a comparison
  comparison: WhatifComparison | null;
}

export interface DecisionHistory {
  studies: StudyRecord[];
}

export function emptyHistory(): DecisionHistory {
  return { studies: [] };
}

export function recordStudy(
  history: DecisionHistory,
  record: StudyRecord,
): DecisionHistory {
  return { studies: [...history.studies, record] };
}

export function studiesFrom(
  history: DecisionHistory,
  session: string,
): StudyRecord[] {
  return history.studies.filter((study) => study.parentSession === session);
}

export type BadgeState = "accepted" | "not-accepted" | "pending";

// The threshold field holds a percentage. A study is accepted when the
// selected partition probability after the change sits at or below it.
export function thresholdBadge(
  afterP: number | null,
  thresholdText: string,
): BadgeState {
  if (afterP === null) {
    return "pending";
  }
  const threshold = Number(thresholdText);
  if (thresholdText.trim() === "" || !Number.isFinite(threshold)) {
    return "pending";
  }
  return percentNumber(afterP) <= threshold ? "accepted" : "not-accepted";
}

// Widths for the before/after bars, as percentages of the wider one so
// the pair always fills the panel sensibly.
export function barWidths(
  beforeP: number,
  afterP: number,
): { before: number; after: number } {
  const widest = Math.max(beforeP, afterP);
  if (widest <= 0) {
    return { before: 0, after: 0 };
  }
  return {
    before: (beforeP / widest) * 100,
    after: (afterP / widest) * 100,
  };
}
