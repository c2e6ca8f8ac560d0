/**
 * End-to-end loop against the real Python service: stage a weight edit,
 * watch the conflicted row settle, commit, and check the document survives
 * a service restart byte-stably.
 */

import { ChildProcess, spawn } from "node:child_process";
import { copyFileSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TunerApi } from "../src/api";
import {
  SessionState,
  commitBody,
  fromDocument,
  isConfused,
  stageWeight,
  whatIfBody,
} from "../src/session";

const FIXTURE = join(__dirname, "..", "..", "src", "cptgen", "fixtures", "fig1.cpt.json");
const PORT = 20000 + (process.pid % 9000);
const BASE = `http://127.0.0.1:${PORT}`;
const CLASH = { PM: "vh", PT: "vl", ME: "vl" };

let proc: ChildProcess | null = null;
let docPath: string;
const api = new TunerApi(BASE);

function startService(): Promise<ChildProcess> {
  const child = spawn(
    "python3",
    ["-m", "cptgen.cli", "serve", docPath, "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  return waitForService().then(() => child);
}

async function waitForService(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/v1/spec`);
      if (response.ok) return;
    } catch {
      // still booting
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up");
}

async function stopService(child: ChildProcess | null): Promise<void> {
  if (!child) return;
  child.kill("SIGTERM");
  await new Promise((resolve) => {
    child.once("exit", resolve);
    setTimeout(resolve, 3000);
  });
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "cpt-tuner-"));
  docPath = join(dir, "doc.cpt.json");
  copyFileSync(FIXTURE, docPath);
  proc = await startService();
}, 30000);

afterAll(async () => {
  await stopService(proc);
});

describe("what-if loop", () => {
  let session: SessionState;

  it("loads the document and sees the conflicted baseline row", async () => {
    const spec = await api.getSpec();
    session = fromDocument(spec.revision, spec.document);
    expect(session.committedWeights).toEqual({ PM: 0.5, PT: 0.25, ME: 0.25 });

    const baseline = await api.whatIf({ targets: [CLASH] });
    const row = baseline.rows[0];
    expect(row.distribution[0]).toBeCloseTo(0.4025, 12);
    expect(row.distribution[4]).toBeCloseTo(0.4025, 12);
    expect(isConfused(row)).toBe(true);
  });

  it("staged weight edit moves the row and clears the conflict flag", async () => {
    session = stageWeight(session, "PM", 0.1);
    const preview = await api.whatIf(whatIfBody(session, [CLASH]));
    const row = preview.rows[0];
    const expected = [0.7205, 0.1365, 0.03, 0.0285, 0.0845];
    row.distribution.forEach((value, i) => {
      expect(value).toBeCloseTo(expected[i], 12);
    });
    expect(isConfused(row)).toBe(false);
    expect(row.hull.member).toBe(true);
    // Preview never commits: the served document still has the old weights.
    const spec = await api.getSpec();
    expect(spec.document.network.parents[0].weight).toBe(0.5);
    expect(spec.revision).toBe(session.revision);
  });

  it("commit persists the staged weights and bumps the revision", async () => {
    const committed = await api.commit(commitBody(session));
    expect(committed.revision).not.toBe(session.revision);

    const spec = await api.getSpec();
    expect(spec.revision).toBe(committed.revision);
    const weights = Object.fromEntries(
      spec.document.network.parents.map((p: any) => [p.name, p.weight]),
    );
    expect(weights.PM).toBeCloseTo(0.1, 12);
    expect(weights.PT).toBeCloseTo(0.45, 12);
    expect(weights.ME).toBeCloseTo(0.45, 12);
  });

  it("a stale commit is rejected with a conflict", async () => {
    await expect(
      api.commit({ revision: session.revision, weights: { PM: 0.3 } }),
    ).rejects.toMatchObject({ status: 409 });
  });

  it("reload round-trips the committed document byte-stably", async () => {
    const before = await api.getSpec();
    const bytesBefore = readFileSync(docPath, "utf-8");

    await stopService(proc);
    proc = await startService();

    const after = await api.getSpec();
    expect(after.revision).toBe(before.revision);
    expect(after.document).toEqual(before.document);
    expect(readFileSync(docPath, "utf-8")).toBe(bytesBefore);
  }, 30000);
});
