/**
 * Pure session logic for the tuning UI: weight staging with proportional
 * renormalization, anchor-row staging, conflict detection, and the commit
 * payload. No DOM, no network — everything here is unit-testable, and all
 * probability numbers flow in from service responses untouched.
 */

export interface ParentInfo {
  name: string;
  weight: number;
  states: string[];
}

export interface HullInfo {
  member: boolean;
  residual: number;
  weights: number[];
}

export interface WhatIfRow {
  configuration: Record<string, string>;
  distribution: number[];
  modes: number[];
  mode_labels: string[];
  competing_modes: number[];
  hull: HullInfo;
}

export interface AnchorInfo {
  configuration: Record<string, string>;
  distribution: number[];
}

export interface SessionState {
  revision: string;
  childName: string;
  childStates: string[];
  parents: ParentInfo[];
  committedWeights: Record<string, number>;
  stagedWeights: Record<string, number> | null;
  committedAnchors: AnchorInfo[];
  stagedAnchors: Record<string, number[]>; // keyed by configKey
  workingSet: Record<string, string>[];
}

/** Stable identity for a configuration, independent of key order. */
export function configKey(configuration: Record<string, string>): string {
  return Object.keys(configuration)
    .sort()
    .map((k) => `${k}=${configuration[k]}`)
    .join("|");
}

/**
 * Pin one weight and rescale the rest proportionally so the vector keeps
 * summing to 1. Untouched weights keep their mutual ratios; if they were
 * all zero the remainder is split evenly.
 */
export function rescaleWeights(
  weights: Record<string, number>,
  parent: string,
  value: number,
): Record<string, number> {
  if (!(parent in weights)) {
    throw new Error(`unknown parent ${parent}`);
  }
  const pinned = Math.min(1, Math.max(0, value));
  const others = Object.keys(weights).filter((name) => name !== parent);
  if (others.length === 0) {
    return { [parent]: 1 };
  }
  const rest = others.reduce((sum, name) => sum + weights[name], 0);
  const remainder = 1 - pinned;
  const out: Record<string, number> = {};
  for (const name of Object.keys(weights)) {
    if (name === parent) {
      out[name] = pinned;
    } else if (rest > 0) {
      out[name] = (weights[name] / rest) * remainder;
    } else {
      out[name] = remainder / others.length;
    }
  }
  return out;
}

export function weightsEqual(
  a: Record<string, number>,
  b: Record<string, number>,
  eps = 1e-12,
): boolean {
  const keys = Object.keys(a);
  if (keys.length !== Object.keys(b).length) return false;
  return keys.every((k) => k in b && Math.abs(a[k] - b[k]) <= eps);
}

/**
 * Edit one cell of a distribution row and rescale the remaining cells
 * proportionally so the row stays a distribution.
 */
export function rescaleRow(row: number[], index: number, value: number): number[] {
  if (index < 0 || index >= row.length) {
    throw new Error(`cell index ${index} out of range`);
  }
  const pinned = Math.min(1, Math.max(0, value));
  const rest = row.reduce((sum, v, i) => (i === index ? sum : sum + v), 0);
  const remainder = 1 - pinned;
  return row.map((v, i) => {
    if (i === index) return pinned;
    if (rest > 0) return (v / rest) * remainder;
    return remainder / (row.length - 1);
  });
}

/** A row is conflicted when two or more comparable peaks compete. */
export function isConfused(row: WhatIfRow): boolean {
  return row.competing_modes.length >= 2;
}

/** The configurations to badge, in response order. */
export function highlightConfusion(rows: WhatIfRow[]): Record<string, string>[] {
  return rows.filter(isConfused).map((row) => row.configuration);
}

export function effectiveWeights(state: SessionState): Record<string, number> {
  return state.stagedWeights ?? state.committedWeights;
}

export function stageWeight(
  state: SessionState,
  parent: string,
  value: number,
): SessionState {
  const staged = rescaleWeights(effectiveWeights(state), parent, value);
  if (weightsEqual(staged, state.committedWeights)) {
    return { ...state, stagedWeights: null };
  }
  return { ...state, stagedWeights: staged };
}

export function stageAnchorCell(
  state: SessionState,
  configuration: Record<string, string>,
  cellIndex: number,
  value: number,
): SessionState {
  const key = configKey(configuration);
  const committed = state.committedAnchors.find(
    (a) => configKey(a.configuration) === key,
  );
  if (!committed) {
    throw new Error(`no anchor for ${key}`);
  }
  const current = state.stagedAnchors[key] ?? committed.distribution;
  const staged = { ...state.stagedAnchors };
  staged[key] = rescaleRow(current, cellIndex, value);
  return { ...state, stagedAnchors: staged };
}

export function isDirty(state: SessionState): boolean {
  return state.stagedWeights !== null || Object.keys(state.stagedAnchors).length > 0;
}

export interface OverridePayload {
  weights?: Record<string, number>;
  anchors?: AnchorInfo[];
  targets?: Record<string, string>[];
}

/** The staged overrides as a /whatif body (optionally scoped to targets). */
export function whatIfBody(
  state: SessionState,
  targets?: Record<string, string>[],
): OverridePayload {
  const body: OverridePayload = {};
  if (state.stagedWeights) {
    body.weights = state.stagedWeights;
  }
  const anchorKeys = Object.keys(state.stagedAnchors);
  if (anchorKeys.length > 0) {
    body.anchors = state.committedAnchors
      .filter((a) => configKey(a.configuration) in state.stagedAnchors)
      .map((a) => ({
        configuration: a.configuration,
        distribution: state.stagedAnchors[configKey(a.configuration)],
      }));
  }
  if (targets) {
    body.targets = targets;
  }
  return body;
}

/** The staged overrides as a /commit body, bound to the shown revision. */
export function commitBody(state: SessionState): OverridePayload & { revision: string } {
  return { revision: state.revision, ...whatIfBody(state) };
}

export function clearStaging(state: SessionState): SessionState {
  return { ...state, stagedWeights: null, stagedAnchors: {} };
}

/** Rebuild session state from a served document object. */
export function fromDocument(revision: string, document: any): SessionState {
  const network = document.network;
  const parents: ParentInfo[] = network.parents.map((p: any) => ({
    name: p.name,
    weight: p.weight,
    states: p.states,
  }));
  const committedWeights: Record<string, number> = {};
  for (const p of parents) committedWeights[p.name] = p.weight;
  return {
    revision,
    childName: network.child.name,
    childStates: network.child.states,
    parents,
    committedWeights,
    stagedWeights: null,
    committedAnchors: document.anchors.map((a: any) => ({
      configuration: a.configuration,
      distribution: a.distribution,
    })),
    stagedAnchors: {},
    workingSet: [],
  };
}
