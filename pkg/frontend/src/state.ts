/** UI session state: the last server view plus transient interaction
 * state (label selection, in-flight flag, connection banner).
 *
 * All game verdicts (grading, cue choice, completion) come from the
 * server view; the reducers here only stage local input for the next
 * request. */

import type { ClientView } from "./types";

export interface UiSessionState {
  sessionId: string | null;
  view: ClientView | null;
  /** click-select-then-place: the label currently picked up */
  selectedLabel: string | null;
  /** locally staged slot assignments, submitted on Teach! */
  placed: Record<string, string>;
  inFlight: boolean;
  connectionLost: boolean;
  notice: string | null;
}

export function initialState(): UiSessionState {
  return {
    sessionId: null,
    view: null,
    selectedLabel: null,
    placed: {},
    inFlight: false,
    connectionLost: false,
    notice: null,
  };
}

export function withSession(
  state: UiSessionState,
  sessionId: string,
  view: ClientView,
): UiSessionState {
  return { ...initialState(), sessionId, view };
}

/** Fold a fresh server view in. Staged placements survive a view refresh
 * while the teach prompt stays open, so polling never eats the learner's
 * half-finished map. */
export function withView(state: UiSessionState, view: ClientView): UiSessionState {
  const teachOpen = view.concept_map !== null;
  return {
    ...state,
    view,
    connectionLost: false,
    placed: teachOpen ? state.placed : {},
    selectedLabel: teachOpen ? state.selectedLabel : null,
  };
}

export function selectLabel(state: UiSessionState, label: string | null): UiSessionState {
  if (label !== null) {
    const offered = state.view?.concept_map?.labels ?? [];
    if (!offered.includes(label)) return state; // never fabricate labels
  }
  return { ...state, selectedLabel: label };
}

export function placeSelected(state: UiSessionState, slotId: string): UiSessionState {
  const map = state.view?.concept_map;
  if (!map || state.selectedLabel === null) return state;
  if (!map.slots.some((slot) => slot.id === slotId)) return state;
  return {
    ...state,
    placed: { ...state.placed, [slotId]: state.selectedLabel },
    selectedLabel: null,
  };
}

export function clearSlot(state: UiSessionState, slotId: string): UiSessionState {
  const placed = { ...state.placed };
  delete placed[slotId];
  return { ...state, placed };
}

export function withInFlight(state: UiSessionState, inFlight: boolean): UiSessionState {
  return { ...state, inFlight };
}

export function withNotice(state: UiSessionState, notice: string | null): UiSessionState {
  return { ...state, notice };
}

export function withConnectionLost(state: UiSessionState): UiSessionState {
  return { ...state, connectionLost: true };
}

export function canSubmit(state: UiSessionState): boolean {
  return (
    !state.inFlight &&
    state.view !== null &&
    state.view.status === "active" &&
    state.view.pending_prompts.includes("teach_request")
  );
}

export function isOver(state: UiSessionState): boolean {
  const status = state.view?.status;
  return status === "completed" || status === "expired";
}
