/** End-to-end: drives a real session server through the client modules.
 *
 * The script plays the whole reference scenario the way a learner would:
 * refuse once (a persuasion cue must appear within one poll interval),
 * submit one wrong concept map (the bad slots come back highlighted),
 * then teach correctly (revival + completed). The exported log must match
 * the golden refusal-then-success shape, record for record.
 */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { SessionController } from "../src/controller";
import { CORRECT, WRONG } from "./fixtures";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

const GOLDEN_SHAPE = [
  "action:dialogue_line",
  "event:Not teaching the water molecule",
  "event:Rejection",
  "action:display_cue",
  "event:Teachability event",
  "action:request_teaching",
  "event:Teach the water molecule",
  "event:Practice knowledge",
  "event:Teach Failure",
  "action:repeat_teaching_prompt",
  "event:Teach the water molecule",
  "event:Practice knowledge",
  "event:Teach success",
  "action:carry_out_solution",
];

let server: ChildProcess;

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/scenarios`);
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("session server did not come up");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "pta-e2e-"));
  server = spawn(
    "python3",
    ["-m", "pta.cli", "serve", "vs_saga", "--port", String(PORT),
     "--data-dir", dataDir],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 40000);

afterAll(() => {
  server?.kill();
});

function choiceIndex(controller: SessionController, npcId: string,
                     needle: string): number {
  const npc = controller.state.view!.npcs.find((n) => n.id === npcId);
  if (!npc) throw new Error(`npc ${npcId} not in scene`);
  const index = npc.choices.findIndex((c) => c.includes(needle));
  if (index < 0) throw new Error(`choice ${needle} not offered by ${npcId}`);
  return index;
}

function stage(controller: SessionController, assignments: Record<string, string>) {
  controller.setState((s) => ({ ...s, placed: { ...assignments } }));
}

describe("end-to-end interactive session", () => {
  it("refuse, fail once, then succeed; log matches the golden shape", async () => {
    const api = new ApiClient(BASE);
    const controller = new SessionController(api, {
      pollMs: 60_000,
      setIntervalFn: (() => 0) as unknown as typeof setInterval,
      clearIntervalFn: (() => {}) as unknown as typeof clearInterval,
    });
    await controller.start("vs_saga");
    expect(controller.state.view?.scene).toBe("knowledge-town");
    expect(controller.state.view?.agent.speech).toBe("Hello ! Welcome to VS Saga !");

    // walk to the tree scene
    await controller.chooseDialogue(
      "water_molecule", choiceIndex(controller, "water_molecule", "banana plant"));
    expect(controller.state.view?.scene).toBe("tree");

    // refuse: the persuasion cue must reach the view within one poll
    const greeting = controller.state.view!.agent.speech;
    await controller.chooseDialogue(
      "water_molecule_tree",
      choiceIndex(controller, "water_molecule_tree", "won't teach"));
    await controller.pollCues();
    const speechAfterRefusal = controller.state.view!.agent.speech;
    expect(speechAfterRefusal).not.toBe(greeting);
    expect(speechAfterRefusal.length).toBeGreaterThan(0);

    // agree to teach: the concept map opens
    await controller.chooseDialogue(
      "water_molecule_tree",
      choiceIndex(controller, "water_molecule_tree", "ready to teach"));
    expect(controller.state.view?.pending_prompts).toContain("teach_request");
    expect(controller.state.view?.concept_map?.labels.length).toBe(4);

    // wrong map: the swapped slots come back highlighted
    stage(controller, WRONG);
    await controller.submitConceptMap();
    expect(controller.state.view?.concept_map?.wrong_slots).toEqual(
      ["membrane", "osmosis_name"]);
    expect(controller.state.view?.status).toBe("active");
    expect(controller.state.view?.pending_prompts).toContain("teach_request");

    // correct map: revival and completion
    stage(controller, CORRECT);
    await controller.submitConceptMap();
    expect(controller.state.view?.status).toBe("completed");
    expect(controller.state.view?.agent.animation).toBe("revival");

    // exported log matches the golden refusal-then-success shape
    const log = await api.fetchLog(controller.state.sessionId!);
    const shape = log
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line))
      .map((record: any) =>
        record.kind === "event"
          ? `event:${record.name}`
          : `action:${record.action}`);
    expect(shape).toEqual(GOLDEN_SHAPE);
  }, 60000);

  it("live views never leave the scenario vocabulary", async () => {
    const api = new ApiClient(BASE);
    const { ALLOWED_ANIMATIONS, ALLOWED_EMOTIONS } = await import("./fixtures");
    const { id, view } = await api.createSession("vs_saga");
    expect(ALLOWED_EMOTIONS).toContain(view.agent.emotion);
    expect(ALLOWED_ANIMATIONS).toContain(view.agent.animation);
    const ticked = await api.applyAction(id, { type: "tick" });
    expect(ALLOWED_EMOTIONS).toContain(ticked.agent.emotion);
    expect(ALLOWED_ANIMATIONS).toContain(ticked.agent.animation);
  }, 30000);
});
