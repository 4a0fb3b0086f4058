// @vitest-environment jsdom
/** Rendering contract: the DOM shows only strings delivered by the server
 * view, and presentation strings stay within the scenario's vocabulary. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { SessionController } from "../src/controller";
import { renderApp } from "../src/render";
import { initialState, withSession, withView } from "../src/state";
import {
  ALLOWED_ANIMATIONS,
  ALLOWED_EMOTIONS,
  completedView,
  teachView,
  townView,
} from "./fixtures";
import type { ClientView } from "../src/types";

function controllerWithView(view: ClientView) {
  const api = new ApiClient("http://test", (async () => {
    throw new TypeError("no network in render tests");
  }) as unknown as typeof fetch);
  const controller = new SessionController(api, {
    setIntervalFn: (() => 0) as unknown as typeof setInterval,
    clearIntervalFn: (() => {}) as unknown as typeof clearInterval,
  });
  controller.setState((s) => withView(withSession(s, "sid", view), view));
  return controller;
}

function render(view: ClientView) {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const controller = controllerWithView(view);
  renderApp(root, controller.state, controller);
  return { root, controller };
}

describe("rendering contract", () => {
  it("agent presentation strings come from the scenario vocabulary", () => {
    for (const view of [townView(), teachView(), completedView()]) {
      const { root } = render(view);
      const avatar = root.querySelector(".avatar")!;
      expect(ALLOWED_EMOTIONS).toContain(avatar.getAttribute("data-emotion"));
      expect(ALLOWED_ANIMATIONS).toContain(avatar.getAttribute("data-animation"));
    }
  });

  it("speech bubble shows exactly the server's speech", () => {
    const view = townView();
    const { root } = render(view);
    expect(root.querySelector(".speech-bubble")?.textContent).toBe(
      view.agent.speech);
  });

  it("renders every npc with its choices and nothing else", () => {
    const view = townView();
    const { root } = render(view);
    const cards = [...root.querySelectorAll(".npc-card")];
    expect(cards.map((c) => c.getAttribute("data-npc"))).toEqual(
      view.npcs.map((n) => n.id));
    const rendered = [...root.querySelectorAll("button.choice")].map(
      (b) => b.textContent);
    expect(rendered).toEqual(view.npcs.flatMap((n) => n.choices));
  });

  it("label tray offers exactly the served labels", () => {
    const view = teachView();
    const { root } = render(view);
    const labels = [...root.querySelectorAll("button.label")].map(
      (b) => b.textContent);
    expect(labels).toEqual(view.concept_map!.labels);
  });

  it("highlights exactly the server-reported wrong slots", () => {
    const view = teachView(["membrane", "osmosis_name"]);
    const { root } = render(view);
    const wrong = [...root.querySelectorAll(".slot.wrong")].map(
      (s) => s.getAttribute("data-slot"));
    expect(wrong).toEqual(["membrane", "osmosis_name"]);
  });

  it("click-select-then-place drives staging through real buttons", () => {
    const view = teachView();
    const { root, controller } = render(view);
    const label = [...root.querySelectorAll<HTMLButtonElement>("button.label")]
      .find((b) => b.textContent === "Osmosis")!;
    label.click();
    expect(controller.state.selectedLabel).toBe("Osmosis");
    // re-render with the new state, then place into the last slot
    renderApp(root, controller.state, controller);
    const slot = root.querySelector<HTMLButtonElement>(
      '[data-slot="osmosis_name"] .slot-target')!;
    slot.click();
    expect(controller.state.placed).toEqual({ osmosis_name: "Osmosis" });
  });

  it("completed sessions show the end screen with a log download", () => {
    const { root } = render(completedView());
    expect(root.querySelector(".end-screen.completed")).toBeTruthy();
    const link = root.querySelector<HTMLAnchorElement>("a.log-download")!;
    expect(link.getAttribute("href")).toContain("/sessions/sid/log");
  });

  it("connection loss shows a banner without dropping the scene", () => {
    const view = townView();
    const { root, controller } = render(view);
    controller.setState((s) => ({ ...s, connectionLost: true }));
    renderApp(root, controller.state, controller);
    expect(root.querySelector(".banner.reconnect")).toBeTruthy();
    expect(root.querySelector(".scene-panel")).toBeTruthy();
  });
});
