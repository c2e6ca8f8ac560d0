/**
 * DOM wiring for the tuning UI. All probabilities shown here come from
 * service responses; the only local arithmetic is weight/row staging, which
 * is previewed through /whatif before anything is committed.
 */

import { ApiError, TunerApi, WhatIfResponse } from "./api.js";
import {
  SessionState,
  WhatIfRow,
  clearStaging,
  commitBody,
  configKey,
  effectiveWeights,
  fromDocument,
  highlightConfusion,
  isConfused,
  isDirty,
  stageAnchorCell,
  stageWeight,
  whatIfBody,
} from "./session.js";

let api = new TunerApi("http://127.0.0.1:8765");
let session: SessionState | null = null;
let lastRows: WhatIfRow[] = [];
let refreshTimer: number | undefined;

const $ = (id: string) => document.getElementById(id)!;

const apiBaseInput = $("api-base") as HTMLInputElement;
const connectButton = $("btn-connect") as HTMLButtonElement;
const commitButton = $("btn-commit") as HTMLButtonElement;
const discardButton = $("btn-discard") as HTMLButtonElement;
const revisionBadge = $("revision-badge");
const statusBanner = $("status-banner");
const weightsPanel = $("weights-panel");
const anchorsPanel = $("anchors-panel");
const conflictsPanel = $("conflicts-panel");
const inspectorPanel = $("inspector-panel");
const addRowPanel = $("add-row-panel");
const titleEl = $("doc-title");

function setBanner(text: string, kind: "ok" | "warn" | "error") {
  statusBanner.textContent = text;
  statusBanner.className = `banner ${kind}`;
}

function fmt(x: number): string {
  return x.toPrecision(4).replace(/\.?0+$/, "");
}

// ------------------------------------------------------------- rendering

function renderWeights() {
  if (!session) return;
  const weights = effectiveWeights(session);
  weightsPanel.innerHTML = "";
  for (const parent of session.parents) {
    const row = document.createElement("div");
    row.className = "weight-row";
    const label = document.createElement("label");
    label.textContent = parent.name;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.01";
    slider.value = String(weights[parent.name]);
    const value = document.createElement("span");
    value.className = "weight-value";
    value.textContent = fmt(weights[parent.name]);
    slider.addEventListener("input", () => {
      if (!session) return;
      session = stageWeight(session, parent.name, Number(slider.value));
      renderWeights();
      scheduleRefresh();
    });
    row.append(label, slider, value);
    weightsPanel.append(row);
  }
  const total = Object.values(weights).reduce((a, b) => a + b, 0);
  const sum = document.createElement("div");
  sum.className = "weight-sum";
  sum.textContent = `sum ${fmt(total)}`;
  weightsPanel.append(sum);
}

function renderAnchors() {
  if (!session) return;
  anchorsPanel.innerHTML = "";
  const table = document.createElement("table");
  const head = document.createElement("tr");
  head.append(...["anchor configuration", ...session.childStates].map((t) => {
    const th = document.createElement("th");
    th.textContent = t;
    return th;
  }));
  table.append(head);
  for (const anchor of session.committedAnchors) {
    const key = configKey(anchor.configuration);
    const staged = session.stagedAnchors[key];
    const values = staged ?? anchor.distribution;
    const tr = document.createElement("tr");
    if (staged) tr.className = "staged";
    const name = document.createElement("td");
    name.textContent = session.parents
      .map((p) => `${p.name}=${anchor.configuration[p.name]}`)
      .join(", ");
    tr.append(name);
    values.forEach((v, i) => {
      const td = document.createElement("td");
      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.max = "1";
      input.step = "0.005";
      input.value = fmt(v);
      input.addEventListener("change", () => {
        if (!session) return;
        session = stageAnchorCell(
          session, anchor.configuration, i, Number(input.value));
        renderAnchors();
        scheduleRefresh();
      });
      td.append(input);
      tr.append(td);
    });
    table.append(tr);
  }
  anchorsPanel.append(table);
}

function renderConflicts() {
  if (!session) return;
  conflictsPanel.innerHTML = "";
  const flagged = highlightConfusion(lastRows);
  const header = document.createElement("div");
  header.className = "panel-note";
  header.textContent = flagged.length
    ? `${flagged.length} row(s) pulled toward competing outcomes`
    : "no conflicted rows";
  conflictsPanel.append(header);
  for (const configuration of flagged.slice(0, 40)) {
    const chip = document.createElement("button");
    chip.className = "chip conflict";
    chip.textContent = session.parents
      .map((p) => configuration[p.name]).join("/");
    chip.title = "add to inspector";
    chip.addEventListener("click", () => addToWorkingSet(configuration));
    conflictsPanel.append(chip);
  }
}

function renderInspector() {
  if (!session) return;
  inspectorPanel.innerHTML = "";
  const byKey = new Map(lastRows.map((r) => [configKey(r.configuration), r]));
  if (session.workingSet.length === 0) {
    const note = document.createElement("div");
    note.className = "panel-note";
    note.textContent = "no rows selected — add one below or click a conflict badge";
    inspectorPanel.append(note);
  }
  for (const configuration of session.workingSet) {
    const row = byKey.get(configKey(configuration));
    const card = document.createElement("div");
    card.className = "row-card";
    const title = document.createElement("div");
    title.className = "row-title";
    title.textContent = session.parents
      .map((p) => `${p.name}=${configuration[p.name]}`).join(", ");
    const remove = document.createElement("button");
    remove.className = "chip";
    remove.textContent = "remove";
    remove.addEventListener("click", () => {
      if (!session) return;
      session.workingSet = session.workingSet.filter(
        (c) => configKey(c) !== configKey(configuration));
      renderInspector();
    });
    title.append(remove);
    card.append(title);
    if (!row) {
      const missing = document.createElement("div");
      missing.className = "panel-note";
      missing.textContent = "no data for this row yet";
      card.append(missing);
      inspectorPanel.append(card);
      continue;
    }
    const bars = document.createElement("div");
    bars.className = "bars";
    row.distribution.forEach((p, i) => {
      const line = document.createElement("div");
      line.className = "bar-line";
      const label = document.createElement("span");
      label.className = "bar-label";
      label.textContent = session!.childStates[i];
      const track = document.createElement("div");
      track.className = "bar-track";
      const fill = document.createElement("div");
      fill.className = row.modes.includes(i) ? "bar-fill mode" : "bar-fill";
      fill.style.width = `${(p * 100).toFixed(2)}%`;
      track.append(fill);
      const value = document.createElement("span");
      value.className = "bar-value";
      value.textContent = fmt(p);
      line.append(label, track, value);
      bars.append(line);
    });
    card.append(bars);
    const meta = document.createElement("div");
    meta.className = "row-meta";
    const modes = document.createElement("span");
    modes.textContent = `modes: ${row.mode_labels.join(", ")}`;
    meta.append(modes);
    if (isConfused(row)) {
      const badge = document.createElement("span");
      badge.className = "badge conflict";
      badge.textContent = "conflicted";
      meta.append(badge);
    }
    const hull = document.createElement("span");
    hull.className = row.hull.member ? "badge ok" : "badge conflict";
    hull.textContent = row.hull.member
      ? `in hull (residual ${row.hull.residual.toExponential(1)})`
      : "outside anchor hull";
    meta.append(hull);
    card.append(meta);
    inspectorPanel.append(card);
  }
}

function renderAddRow() {
  if (!session) return;
  addRowPanel.innerHTML = "";
  const selects: HTMLSelectElement[] = [];
  for (const parent of session.parents) {
    const select = document.createElement("select");
    for (const state of parent.states) {
      const option = document.createElement("option");
      option.value = state;
      option.textContent = `${parent.name}=${state}`;
      select.append(option);
    }
    selects.push(select);
    addRowPanel.append(select);
  }
  const add = document.createElement("button");
  add.textContent = "inspect row";
  add.addEventListener("click", () => {
    if (!session) return;
    const configuration: Record<string, string> = {};
    session.parents.forEach((p, i) => (configuration[p.name] = selects[i].value));
    addToWorkingSet(configuration);
  });
  addRowPanel.append(add);
}

function renderAll() {
  if (!session) return;
  titleEl.textContent = `${session.childName} | ${session.parents
    .map((p) => p.name).join(", ")}`;
  revisionBadge.textContent = `rev ${session.revision}`;
  commitButton.disabled = !isDirty(session);
  discardButton.disabled = !isDirty(session);
  renderWeights();
  renderAnchors();
  renderConflicts();
  renderInspector();
}

function addToWorkingSet(configuration: Record<string, string>) {
  if (!session) return;
  const key = configKey(configuration);
  if (!session.workingSet.some((c) => configKey(c) === key)) {
    session.workingSet.push(configuration);
  }
  renderInspector();
}

// ------------------------------------------------------------ networking

async function refreshRows() {
  if (!session) return;
  try {
    const response: WhatIfResponse = await api.whatIf(whatIfBody(session));
    lastRows = response.rows;
    setBanner(
      isDirty(session) ? "previewing staged edits (not committed)" : "in sync",
      isDirty(session) ? "warn" : "ok");
    renderConflicts();
    renderInspector();
    commitButton.disabled = !isDirty(session);
    discardButton.disabled = !isDirty(session);
  } catch (error) {
    setBanner(
      `service unreachable - showing stale data, edits preserved (${error})`,
      "error");
  }
}

function scheduleRefresh() {
  window.clearTimeout(refreshTimer);
  refreshTimer = window.setTimeout(() => void refreshRows(), 150);
}

async function loadDocument() {
  try {
    const spec = await api.getSpec();
    session = fromDocument(spec.revision, spec.document);
    lastRows = [];
    renderAll();
    await refreshRows();
    if (session.workingSet.length === 0) {
      const flagged = highlightConfusion(lastRows);
      for (const configuration of flagged.slice(0, 3)) {
        addToWorkingSet(configuration);
      }
    }
  } catch (error) {
    setBanner(`cannot load document: ${error}`, "error");
  }
}

async function commitStaged() {
  if (!session || !isDirty(session)) return;
  try {
    await api.commit(commitBody(session));
    setBanner("committed", "ok");
    const keep = session.workingSet;
    await loadDocument();
    if (session) {
      (session as SessionState).workingSet = keep;
      renderInspector();
    }
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      setBanner(
        "conflict: the document changed on the server - reload to continue",
        "error");
    } else {
      setBanner(`commit failed: ${error}`, "error");
    }
  }
}

connectButton.addEventListener("click", () => {
  api = new TunerApi(apiBaseInput.value);
  void loadDocument();
});
commitButton.addEventListener("click", () => void commitStaged());
discardButton.addEventListener("click", () => {
  if (!session) return;
  session = clearStaging(session);
  renderAll();
  void refreshRows();
});

apiBaseInput.value = api.baseUrl;
void loadDocument();
