/** DOM rendering. Everything shown comes from the last server view;
 * concept-map placement is click-select-then-place with real buttons, so
 * keyboard users get the same flow for free. */

import { SessionController } from "./controller";
import {
  UiSessionState,
  canSubmit,
  clearSlot,
  isOver,
  placeSelected,
  selectLabel,
} from "./state";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderAgentPanel(doc: Document, state: UiSessionState): HTMLElement {
  const agent = state.view!.agent;
  const panel = el(doc, "section", "agent-panel");
  const avatar = el(doc, "div", `avatar avatar-${agent.animation}`);
  avatar.setAttribute("data-emotion", agent.emotion);
  avatar.setAttribute("data-animation", agent.animation);
  avatar.appendChild(el(doc, "span", "avatar-emotion", agent.emotion));
  panel.appendChild(avatar);
  if (agent.speech) {
    const bubble = el(doc, "div", "speech-bubble", agent.speech);
    bubble.setAttribute("role", "status");
    panel.appendChild(bubble);
  }
  return panel;
}

function renderNpcCards(
  doc: Document,
  state: UiSessionState,
  controller: SessionController,
): HTMLElement {
  const view = state.view!;
  const section = el(doc, "section", "scene-panel");
  section.appendChild(el(doc, "h2", "scene-name", view.scene));
  for (const npc of view.npcs) {
    const card = el(doc, "article", npc.distracter ? "npc-card distracter" : "npc-card");
    card.setAttribute("data-npc", npc.id);
    card.appendChild(el(doc, "h3", "npc-name", npc.name));
    card.appendChild(el(doc, "p", "npc-line", npc.line));
    npc.choices.forEach((choice, index) => {
      const button = el(doc, "button", "choice", choice);
      button.disabled = state.inFlight || isOver(state);
      button.addEventListener("click", () => {
        void controller.chooseDialogue(npc.id, index);
      });
      card.appendChild(button);
    });
    section.appendChild(card);
  }
  return section;
}

function renderConceptMap(
  doc: Document,
  state: UiSessionState,
  controller: SessionController,
): HTMLElement | null {
  const map = state.view!.concept_map;
  if (!map) return null;
  const section = el(doc, "section", "concept-map");
  section.appendChild(el(doc, "h2", undefined, "Concept map"));
  section.appendChild(el(doc, "p", "prompt", map.prompt));

  const slots = el(doc, "div", "slots");
  for (const slot of map.slots) {
    const wrong = map.wrong_slots.includes(slot.id);
    const row = el(doc, "div", wrong ? "slot wrong" : "slot");
    row.setAttribute("data-slot", slot.id);
    row.appendChild(el(doc, "span", "slot-context", slot.context));
    const placed = state.placed[slot.id] ?? "";
    const target = el(doc, "button", "slot-target", placed || "(place label)");
    target.disabled = state.inFlight || isOver(state);
    target.addEventListener("click", () => {
      // with a label picked up, clicking a slot places it; otherwise the
      // click clears whatever was there
      controller.setState((s) =>
        s.selectedLabel !== null ? placeSelected(s, slot.id) : clearSlot(s, slot.id),
      );
    });
    row.appendChild(target);
    slots.appendChild(row);
  }
  section.appendChild(slots);

  const tray = el(doc, "div", "labels");
  for (const label of map.labels) {
    const selected = state.selectedLabel === label;
    const button = el(doc, "button", selected ? "label selected" : "label", label);
    button.setAttribute("aria-pressed", String(selected));
    button.disabled = state.inFlight || isOver(state);
    button.addEventListener("click", () => {
      controller.setState((s) =>
        selectLabel(s, s.selectedLabel === label ? null : label),
      );
    });
    tray.appendChild(button);
  }
  section.appendChild(tray);

  const teach = el(doc, "button", "teach", "Teach !");
  teach.disabled = !canSubmit(state);
  teach.addEventListener("click", () => {
    void controller.submitConceptMap();
  });
  section.appendChild(teach);
  return section;
}

function renderEndScreen(
  doc: Document,
  state: UiSessionState,
  controller: SessionController,
): HTMLElement {
  const status = state.view!.status;
  const panel = el(doc, "section", `end-screen ${status}`);
  panel.appendChild(
    el(doc, "h2", undefined,
       status === "completed" ? "The banana plant is saved!" : "Session expired"),
  );
  const url = controller.logDownloadUrl();
  if (url) {
    const link = el(doc, "a", "log-download", "Download session log");
    link.setAttribute("href", url);
    link.setAttribute("download", "session.jsonl");
    panel.appendChild(link);
  }
  return panel;
}

export function renderApp(
  root: HTMLElement,
  state: UiSessionState,
  controller: SessionController,
): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  if (state.connectionLost) {
    const banner = el(doc, "div", "banner reconnect",
                      "Connection lost - retrying...");
    banner.setAttribute("role", "alert");
    root.appendChild(banner);
  }
  if (state.notice) {
    const notice = el(doc, "div", "banner notice", state.notice);
    notice.setAttribute("role", "alert");
    root.appendChild(notice);
  }
  if (!state.view) {
    root.appendChild(el(doc, "p", "loading", "Starting session..."));
    return;
  }
  root.appendChild(renderAgentPanel(doc, state));
  if (isOver(state)) {
    root.appendChild(renderEndScreen(doc, state, controller));
    return;
  }
  root.appendChild(renderNpcCards(doc, state, controller));
  const conceptMap = renderConceptMap(doc, state, controller);
  if (conceptMap) root.appendChild(conceptMap);
}
